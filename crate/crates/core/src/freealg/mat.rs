use std::fmt;
use std::sync::Arc;

use super::{same_alphabet, Alphabet, FreeAlgError, FreePoly};
use crate::exactlin::{ExactMatrix, Field};

/// A dense matrix with entries in the free algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct FreeMat<K: Field> {
    field: K,
    alphabet: Arc<Alphabet>,
    rows: usize,
    cols: usize,
    entries: Vec<FreePoly<K>>,
}

impl<K: Field> FreeMat<K> {
    pub fn zeros(field: K, alphabet: &Arc<Alphabet>, rows: usize, cols: usize) -> Self {
        FreeMat {
            field,
            alphabet: alphabet.clone(),
            rows,
            cols,
            entries: vec![FreePoly::zero(field, alphabet); rows * cols],
        }
    }

    pub fn identity(field: K, alphabet: &Arc<Alphabet>, n: usize) -> Self {
        let mut m = Self::zeros(field, alphabet, n, n);
        for i in 0..n {
            m.set(i, i, FreePoly::one(field, alphabet));
        }
        m
    }

    /// The matrix unit `E_{ij}` (0-based indices).
    pub fn unit(field: K, alphabet: &Arc<Alphabet>, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, alphabet, n, n);
        m.set(i, j, FreePoly::one(field, alphabet));
        m
    }

    pub fn from_scalar(alphabet: &Arc<Alphabet>, m: &ExactMatrix<K>) -> Self {
        let f = m.field();
        let mut out = Self::zeros(f, alphabet, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, FreePoly::constant(f, alphabet, m.get(i, j).clone()));
            }
        }
        out
    }

    pub fn from_entries(
        field: K,
        alphabet: &Arc<Alphabet>,
        rows: usize,
        cols: usize,
        entries: Vec<FreePoly<K>>,
    ) -> Result<Self, FreeAlgError> {
        if entries.len() != rows * cols {
            return Err(FreeAlgError::ShapeMismatch {
                op: "from_entries",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        for e in &entries {
            same_alphabet(alphabet, e.alphabet())?;
        }
        Ok(FreeMat {
            field,
            alphabet: alphabet.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
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

    pub fn get(&self, i: usize, j: usize) -> &FreePoly<K> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: FreePoly<K>) {
        debug_assert!(
            Arc::ptr_eq(&self.alphabet, p.alphabet()) || *self.alphabet == **p.alphabet()
        );
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[FreePoly<K>] {
        &self.entries
    }

    /// `(row, col, entry)` for every nonzero entry, row-major.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &FreePoly<K>)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(k, p)| (k / self.cols.max(1), k % self.cols.max(1), p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FreePoly::is_zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(FreePoly::degree).max()
    }

    /// The underlying scalar matrix when every entry is constant.
    pub fn as_scalar(&self) -> Option<ExactMatrix<K>> {
        let data = self
            .entries
            .iter()
            .map(FreePoly::as_constant)
            .collect::<Option<Vec<_>>>()?;
        ExactMatrix::new(self.field, self.rows, self.cols, data).ok()
    }

    fn check_same(&self, rhs: &Self, op: &'static str) -> Result<(), FreeAlgError> {
        same_alphabet(&self.alphabet, &rhs.alphabet)?;
        if self.shape() != rhs.shape() {
            return Err(FreeAlgError::ShapeMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        self.check_same(rhs, "add")?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(FreeMat {
            entries,
            ..self.clone_shell()
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        self.check_same(rhs, "sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_, _>>()?;
        Ok(FreeMat {
            entries,
            ..self.clone_shell()
        })
    }

    fn clone_shell(&self) -> Self {
        FreeMat {
            field: self.field,
            alphabet: self.alphabet.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: Vec::new(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        same_alphabet(&self.alphabet, &rhs.alphabet)?;
        if self.cols != rhs.rows {
            return Err(FreeAlgError::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.field, &self.alphabet, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        FreeMat {
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
            ..self.clone_shell()
        }
    }

    /// `p · self`, entrywise from the left.
    pub fn left_mul_poly(&self, p: &FreePoly<K>) -> Result<Self, FreeAlgError> {
        Ok(FreeMat {
            entries: self
                .entries
                .iter()
                .map(|e| p.mul(e))
                .collect::<Result<_, _>>()?,
            ..self.clone_shell()
        })
    }

    /// `self · p`, entrywise from the right.
    pub fn right_mul_poly(&self, p: &FreePoly<K>) -> Result<Self, FreeAlgError> {
        Ok(FreeMat {
            entries: self
                .entries
                .iter()
                .map(|e| e.mul(p))
                .collect::<Result<_, _>>()?,
            ..self.clone_shell()
        })
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(self.field, &self.alphabet, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Applies `f` to every entry; `f` must produce polynomials over `alphabet`.
    pub fn try_map(
        &self,
        alphabet: &Arc<Alphabet>,
        f: impl Fn(&FreePoly<K>) -> Result<FreePoly<K>, FreeAlgError>,
    ) -> Result<Self, FreeAlgError> {
        Ok(FreeMat {
            field: self.field,
            alphabet: alphabet.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn embed(&self, target: &Arc<Alphabet>) -> Result<Self, FreeAlgError> {
        self.try_map(target, |p| p.embed(target))
    }

    pub fn substitute(
        &self,
        target: &Arc<Alphabet>,
        images: &[FreePoly<K>],
    ) -> Result<Self, FreeAlgError> {
        self.try_map(target, |p| p.substitute(target, images))
    }

    /// Replaces each letter by an `ℓ × ℓ` matrix, giving an `nℓ × mℓ` block matrix.
    pub fn evaluate(
        &self,
        values: &[ExactMatrix<K>],
        ell: usize,
    ) -> Result<ExactMatrix<K>, FreeAlgError> {
        let mut out = ExactMatrix::zeros(self.field, self.rows * ell, self.cols * ell);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if !p.is_zero() {
                    out.set_block(i * ell, j * ell, &p.evaluate(values, ell)?);
                }
            }
        }
        Ok(out)
    }

    pub fn map_field<L: Field>(
        &self,
        target: L,
        convert: impl Fn(&K::Elem) -> Option<L::Elem>,
    ) -> Option<FreeMat<L>> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.map_field(target, &convert))
            .collect::<Option<Vec<_>>>()?;
        Some(FreeMat {
            field: target,
            alphabet: self.alphabet.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Row-major entry texts.
    pub fn to_rows_text(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_text()).collect())
            .collect()
    }

    pub fn parse_rows(
        field: K,
        alphabet: &Arc<Alphabet>,
        cols: usize,
        rows: &[Vec<String>],
    ) -> Result<Self, FreeAlgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(FreeAlgError::ShapeMismatch {
                    op: "parse_rows",
                    left: (rows.len(), cols),
                    right: (1, r.len()),
                });
            }
            for t in r {
                entries.push(FreePoly::parse(field, alphabet, t)?);
            }
        }
        Self::from_entries(field, alphabet, rows.len(), cols, entries)
    }
}

impl<K: Field> fmt::Debug for FreeMat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_rows_text().iter().map(|r| r.join(", ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Rationals;

    fn alpha() -> Arc<Alphabet> {
        Alphabet::new(&["x", "y"]).unwrap()
    }

    fn e(i: usize, j: usize) -> FreeMat<Rationals> {
        FreeMat::unit(Rationals, &alpha(), 2, i, j)
    }

    fn letter(name: &str) -> FreePoly<Rationals> {
        FreePoly::letter(Rationals, &alpha(), name).unwrap()
    }

    #[test]
    fn matrix_units_multiply() {
        assert_eq!(e(1, 0).mul(&e(0, 0)).unwrap(), e(1, 0));
        assert!(e(0, 0).mul(&e(1, 0)).unwrap().is_zero());
        let xe = e(1, 0).left_mul_poly(&letter("x")).unwrap();
        let ye = e(0, 0).left_mul_poly(&letter("y")).unwrap();
        let xy = letter("x").mul(&letter("y")).unwrap();
        assert_eq!(xe.mul(&ye).unwrap(), e(1, 0).left_mul_poly(&xy).unwrap());
    }

    #[test]
    fn shape_errors() {
        let wide = FreeMat::zeros(Rationals, &alpha(), 2, 3);
        assert!(matches!(
            wide.mul(&wide),
            Err(FreeAlgError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            wide.add(&e(0, 0)),
            Err(FreeAlgError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn evaluation_is_blockwise() {
        let f = Rationals;
        let m = e(0, 1).left_mul_poly(&letter("x")).unwrap();
        let x = ExactMatrix::from_i64(f, &[&[1, 2], &[3, 4]]);
        let y = ExactMatrix::identity(f, 2);
        let val = m.evaluate(&[x.clone(), y], 2).unwrap();
        assert_eq!(val.block(0, 2, 2, 2), x);
        assert!(val.block(0, 0, 2, 2).is_zero());
    }

    #[test]
    fn rows_text_round_trip() {
        let m = e(0, 1)
            .left_mul_poly(&letter("x"))
            .unwrap()
            .add(&e(1, 1))
            .unwrap();
        let rows = m.to_rows_text();
        assert_eq!(
            rows,
            vec![
                vec!["0".to_string(), "x".into()],
                vec!["0".into(), "1".into()]
            ]
        );
        assert_eq!(
            FreeMat::parse_rows(Rationals, &alpha(), 2, &rows).unwrap(),
            m
        );
    }
}
