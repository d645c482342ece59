use std::fmt;

use super::field::Field;
use super::LinalgError;

/// Dense row-major matrix over an exact field.
///
/// `0×n` and `n×0` shapes are valid and act as the empty map.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<K: Field> {
    pub matrix: ExactMatrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Field> ExactMatrix<K> {
    pub fn new(
        field: K,
        rows: usize,
        cols: usize,
        data: Vec<K::Elem>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadData {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(ExactMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: K, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(field: K, cols: usize, rows: Vec<Vec<K::Elem>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::BadData {
                    rows: r,
                    cols,
                    len: row.len(),
                });
            }
            data.extend(row);
        }
        Self::new(field, r, cols, data)
    }

    /// Convenience constructor from small integers, mostly for fixtures.
    pub fn from_i64(field: K, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| field.from_i64(x))
            })
            .collect();
        ExactMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: K, rows: usize, columns: &[Vec<K::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: K::Elem) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[K::Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<K::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[K::Elem]) -> Result<Vec<K::Elem>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    fn zip_with(
        &self,
        rhs: &Self,
        op: &'static str,
        g: impl Fn(&K::Elem, &K::Elem) -> K::Elem,
    ) -> Result<Self, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::ShapeMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| g(a, b))
            .collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<K::Elem>) -> Self {
        ExactMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        let f = self.field;
        self.zip_with(rhs, "add", |a, b| f.add(a, b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        let f = self.field;
        self.zip_with(rhs, "sub", |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let f = self.field;
        self.with_data(self.data.iter().map(|x| f.mul(c, x)).collect())
    }

    /// Copy of the rectangular block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut b = Self::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Horizontal concatenation; all parts must share the row count `rows`.
    pub fn hstack(field: K, rows: usize, parts: &[&Self]) -> Result<Self, LinalgError> {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut c0 = 0;
        for p in parts {
            if p.rows != rows {
                return Err(LinalgError::ShapeMismatch {
                    op: "hstack",
                    left: (rows, c0),
                    right: p.shape(),
                });
            }
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation; all parts must share the column count `cols`.
    pub fn vstack(field: K, cols: usize, parts: &[&Self]) -> Result<Self, LinalgError> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut r0 = 0;
        for p in parts {
            if p.cols != cols {
                return Err(LinalgError::ShapeMismatch {
                    op: "vstack",
                    left: (r0, cols),
                    right: p.shape(),
                });
            }
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        Ok(out)
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first nonzero
    /// entry at or below the current row.
    pub fn rref(&self) -> Rref<K> {
        let f = self.field;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !f.is_zero(a.get(r, col))) else {
                continue;
            };
            a.swap_rows(p, row);
            let inv = f.inv(a.get(row, col)).expect("pivot is nonzero");
            for j in col..a.cols {
                let v = f.mul(a.get(row, j), &inv);
                a.set(row, j, v);
            }
            for r in 0..a.rows {
                if r == row || f.is_zero(a.get(r, col)) {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in col..a.cols {
                    let v = f.sub(a.get(r, j), &f.mul(&factor, a.get(row, j)));
                    a.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: a, pivots }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<Vec<K::Elem>> {
        let f = self.field;
        let Rref { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }

    /// The columns of `self` at the pivot positions of its echelon form.
    pub fn column_space_basis(&self) -> Vec<Vec<K::Elem>> {
        self.rref().pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let f = self.field;
        let aug = Self::hstack(f, n, &[self, &Self::identity(f, n)])?;
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().filter(|&&p| p < n).count() < n {
            return Err(LinalgError::NotInvertible);
        }
        Ok(matrix.block(0, n, n, n))
    }

    /// Re-expresses the matrix over another field via `convert`.
    pub fn map_field<L: Field>(
        &self,
        target: L,
        convert: impl Fn(&K::Elem) -> Option<L::Elem>,
    ) -> Option<ExactMatrix<L>> {
        let data = self.data.iter().map(convert).collect::<Option<Vec<_>>>()?;
        Some(ExactMatrix {
            field: target,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Parses `1 2; 3/2 -1` (entries by whitespace, rows by `;`) with a known shape.
    pub fn parse(field: K, rows: usize, cols: usize, text: &str) -> Result<Self, LinalgError> {
        let text = text.trim();
        let row_texts: Vec<&str> = if text.is_empty() {
            Vec::new()
        } else {
            text.split(';').collect()
        };
        if rows * cols == 0 {
            // Empty shapes may be written as nothing or `[]`.
            if text.is_empty() || text == "[]" || row_texts.iter().all(|r| r.trim().is_empty()) {
                return Ok(Self::zeros(field, rows, cols));
            }
        }
        if row_texts.len() != rows {
            return Err(LinalgError::BadData {
                rows,
                cols,
                len: row_texts.len(),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in row_texts {
            let entries: Vec<&str> = r.split_whitespace().collect();
            if entries.len() != cols {
                return Err(LinalgError::BadData {
                    rows,
                    cols,
                    len: entries.len(),
                });
            }
            for e in entries {
                data.push(field.parse(e).map_err(LinalgError::Field)?);
            }
        }
        Self::new(field, rows, cols, data)
    }

    /// Inverse of [`ExactMatrix::parse`]; empty shapes render as `[]`.
    pub fn to_text(&self) -> String {
        if self.rows * self.cols == 0 {
            return "[]".to_string();
        }
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| self.field.format(x))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl<K: Field> fmt::Debug for ExactMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]({}x{})", self.to_text(), self.rows, self.cols)
    }
}

impl<K: Field> fmt::Display for ExactMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
