//! Finite-dimensional quiver representations and their Hom spaces.
//!
//! Arrow matrices act on column vectors: `φ_e` has shape `α_{t(e)} × α_{s(e)}`.
//! A morphism `(f_v)` from `M` to `N` satisfies `f_{t(e)} φ^M_e = φ^N_e f_{s(e)}`.

mod text;

use rand::Rng;

use crate::exactlin::{ExactMatrix, Field, LinalgError};
use crate::quiver::{DimVector, Quiver, QuiverError};

pub use text::{load_representation, parse_representation, RepFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("the representation is zero")]
    ZeroModule,
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("subspace vertex `{0}` does not match the representation")]
    VertexMismatch(String),
    #[error("arrow `{arrow}` needs a {expected:?} matrix, got {found:?}")]
    ShapeMismatch {
        arrow: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("vectors of length {found} do not fit in dimension {ambient}")]
    DimensionExceeded { ambient: usize, found: usize },
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation<K: Field> {
    field: K,
    quiver: Quiver,
    dims: Vec<usize>,
    maps: Vec<ExactMatrix<K>>,
}

impl<K: Field> Representation<K> {
    /// `dims` and `maps` follow the quiver's vertex and arrow order.
    pub fn new(
        field: K,
        quiver: Quiver,
        dims: Vec<usize>,
        maps: Vec<ExactMatrix<K>>,
    ) -> Result<Self, RepError> {
        if dims.len() != quiver.vertex_count() {
            return Err(QuiverError::KeyMismatch {
                expected: quiver.vertices().to_vec(),
                found: (0..dims.len()).map(|i| format!("#{i}")).collect(),
            }
            .into());
        }
        if maps.len() != quiver.arrows().len() {
            let missing = quiver
                .arrows()
                .get(maps.len())
                .map_or_else(|| format!("#{}", maps.len()), |a| a.name.clone());
            return Err(RepError::UnknownArrow(missing));
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            let expected = (dims[a.target], dims[a.source]);
            if m.shape() != expected {
                return Err(RepError::ShapeMismatch {
                    arrow: a.name.clone(),
                    expected,
                    found: m.shape(),
                });
            }
        }
        Ok(Representation {
            field,
            quiver,
            dims,
            maps,
        })
    }

    pub fn from_dim_vector(
        field: K,
        quiver: Quiver,
        dims: &DimVector,
        maps: Vec<ExactMatrix<K>>,
    ) -> Result<Self, RepError> {
        let dims = dims.in_order(&quiver)?;
        Self::new(field, quiver, dims, maps)
    }

    /// All arrows act by zero.
    pub fn zero_maps(field: K, quiver: Quiver, dims: Vec<usize>) -> Result<Self, RepError> {
        if dims.len() != quiver.vertex_count() {
            return Self::new(field, quiver, dims, Vec::new());
        }
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| ExactMatrix::zeros(field, dims[a.target], dims[a.source]))
            .collect();
        Self::new(field, quiver, dims, maps)
    }

    /// The simple representation concentrated at `vertex`.
    pub fn simple(field: K, quiver: Quiver, vertex: &str) -> Result<Self, RepError> {
        let v = quiver
            .vertex_index(vertex)
            .ok_or_else(|| RepError::VertexMismatch(vertex.to_string()))?;
        let mut dims = vec![0; quiver.vertex_count()];
        dims[v] = 1;
        Self::zero_maps(field, quiver, dims)
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector::from_ordered(&self.quiver, &self.dims).expect("dims follow vertex order")
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn maps(&self) -> &[ExactMatrix<K>] {
        &self.maps
    }

    pub fn map(&self, arrow: &str) -> Option<&ExactMatrix<K>> {
        self.quiver.arrow_index(arrow).map(|i| &self.maps[i])
    }
}

/// A basis of `Hom(M, N)`; each element lists one matrix per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwinerBasis<K: Field> {
    pub maps: Vec<Vec<ExactMatrix<K>>>,
}

impl<K: Field> IntertwinerBasis<K> {
    pub fn dimension(&self) -> usize {
        self.maps.len()
    }
}

fn same_quiver<K: Field>(m: &Representation<K>, n: &Representation<K>) -> Result<(), RepError> {
    if m.quiver != n.quiver {
        return Err(RepError::QuiverMismatch);
    }
    Ok(())
}

pub fn hom_basis<K: Field>(
    m: &Representation<K>,
    n: &Representation<K>,
) -> Result<IntertwinerBasis<K>, RepError> {
    same_quiver(m, n)?;
    let field = m.field;
    // Unknown f_v is a β_v × α_v block, vectorized row-major at offset[v].
    let mut offset = Vec::with_capacity(m.dims.len());
    let mut unknowns = 0;
    for (a, b) in m.dims.iter().zip(&n.dims) {
        offset.push(unknowns);
        unknowns += a * b;
    }
    let var = |v: usize, i: usize, j: usize| offset[v] + i * m.dims[v] + j;

    let mut rows: Vec<Vec<K::Elem>> = Vec::new();
    for (e, arrow) in m.quiver.arrows().iter().enumerate() {
        let (s, t) = (arrow.source, arrow.target);
        let (phi_m, phi_n) = (&m.maps[e], &n.maps[e]);
        // (f_t φ^M − φ^N f_s)[i][j] = 0 for i < β_t, j < α_s.
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let mut row = vec![field.zero(); unknowns];
                for k in 0..m.dims[t] {
                    let c = &mut row[var(t, i, k)];
                    *c = field.add(c, phi_m.get(k, j));
                }
                for k in 0..n.dims[s] {
                    let c = &mut row[var(s, k, j)];
                    *c = field.sub(c, phi_n.get(i, k));
                }
                rows.push(row);
            }
        }
    }
    let system = ExactMatrix::from_rows(field, unknowns, rows)?;
    let maps = system
        .nullspace_basis()
        .into_iter()
        .map(|x| {
            (0..m.dims.len())
                .map(|v| {
                    let len = m.dims[v] * n.dims[v];
                    let data = x[offset[v]..offset[v] + len].to_vec();
                    ExactMatrix::new(field, n.dims[v], m.dims[v], data).expect("block shape")
                })
                .collect()
        })
        .collect();
    Ok(IntertwinerBasis { maps })
}

pub fn end_dim<K: Field>(m: &Representation<K>) -> Result<usize, RepError> {
    Ok(hom_basis(m, m)?.dimension())
}

pub fn is_brick<K: Field>(m: &Representation<K>) -> Result<bool, RepError> {
    if m.total_dim() == 0 {
        return Err(RepError::ZeroModule);
    }
    Ok(end_dim(m)? == 1)
}

/// `Σ_v α_v β_v − Σ_e α_{s(e)} β_{t(e)}`.
pub fn euler_form(q: &Quiver, alpha: &DimVector, beta: &DimVector) -> Result<i64, RepError> {
    let a = alpha.in_order(q)?;
    let b = beta.in_order(q)?;
    Ok(euler_form_ordered(q, &a, &b))
}

pub(crate) fn euler_form_ordered(q: &Quiver, a: &[usize], b: &[usize]) -> i64 {
    let diag: i64 = a.iter().zip(b).map(|(x, y)| (x * y) as i64).sum();
    let arrows: i64 = q
        .arrows()
        .iter()
        .map(|e| (a[e.source] * b[e.target]) as i64)
        .sum();
    diag - arrows
}

/// `dim Ext¹(M, N)`, from the hereditary identity `hom − ext = ⟨α, β⟩`.
pub fn ext1_dim<K: Field>(m: &Representation<K>, n: &Representation<K>) -> Result<usize, RepError> {
    let hom = hom_basis(m, n)?.dimension() as i64;
    let ext = hom - euler_form_ordered(&m.quiver, &m.dims, &n.dims);
    Ok(usize::try_from(ext).expect("Ext¹ dimension is nonnegative over a hereditary algebra"))
}

pub fn is_exceptional<K: Field>(m: &Representation<K>) -> Result<bool, RepError> {
    Ok(is_brick(m)? && ext1_dim(m, m)? == 0)
}

/// A subspace of the coordinate space at one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<K: Field> {
    field: K,
    vertex: String,
    ambient: usize,
    basis: Vec<Vec<K::Elem>>,
}

impl<K: Field> Subspace<K> {
    pub fn new(
        field: K,
        vertex: impl Into<String>,
        ambient: usize,
        basis: Vec<Vec<K::Elem>>,
    ) -> Result<Self, RepError> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient) {
            return Err(RepError::DimensionExceeded {
                ambient,
                found: v.len(),
            });
        }
        let sub = Subspace {
            field,
            vertex: vertex.into(),
            ambient,
            basis,
        };
        if sub.matrix().rank() != sub.basis.len() {
            return Err(RepError::DependentBasis);
        }
        Ok(sub)
    }

    pub fn vertex(&self) -> &str {
        &self.vertex
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<K::Elem>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn matrix(&self) -> ExactMatrix<K> {
        ExactMatrix::from_columns(self.field, self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        let mut cols = self.basis.clone();
        cols.push(v.to_vec());
        ExactMatrix::from_columns(self.field, self.ambient, &cols).rank() == self.basis.len()
    }
}

/// `(Ker φ_e at s(e), Im φ_e at t(e))`.
pub fn kernel_image<K: Field>(
    m: &Representation<K>,
    arrow: &str,
) -> Result<(Subspace<K>, Subspace<K>), RepError> {
    let e = m
        .quiver
        .arrow_index(arrow)
        .ok_or_else(|| RepError::UnknownArrow(arrow.to_string()))?;
    let a = &m.quiver.arrows()[e];
    let phi = &m.maps[e];
    let ker = Subspace::new(
        m.field,
        m.quiver.source_name(a),
        phi.cols(),
        phi.nullspace_basis(),
    )?;
    let im = Subspace::new(
        m.field,
        m.quiver.target_name(a),
        phi.rows(),
        phi.column_space_basis(),
    )?;
    Ok((ker, im))
}

/// Greedy complement: standard basis vectors in index order that raise the rank.
pub fn complement<K: Field>(sub: &Subspace<K>, ambient: usize) -> Result<Subspace<K>, RepError> {
    if sub.ambient != ambient || sub.dim() > ambient {
        return Err(RepError::DimensionExceeded {
            ambient,
            found: sub.ambient,
        });
    }
    let field = sub.field;
    let mut cols = sub.basis.clone();
    let mut chosen = Vec::new();
    for i in 0..ambient {
        if cols.len() == ambient {
            break;
        }
        let mut e = vec![field.zero(); ambient];
        e[i] = field.one();
        cols.push(e.clone());
        if ExactMatrix::from_columns(field, ambient, &cols).rank() == cols.len() {
            chosen.push(e);
        } else {
            cols.pop();
        }
    }
    Subspace::new(field, sub.vertex.clone(), ambient, chosen)
}

/// Whether every endomorphism of `m` maps `sub` into itself.
pub fn invariant_under_end<K: Field>(
    m: &Representation<K>,
    sub: &Subspace<K>,
) -> Result<bool, RepError> {
    Ok(invariance_witness(m, sub)?.is_none())
}

/// Index (into `hom_basis(m, m)`) of a basis endomorphism moving `sub` out of itself.
pub fn invariance_witness<K: Field>(
    m: &Representation<K>,
    sub: &Subspace<K>,
) -> Result<Option<usize>, RepError> {
    let v = m
        .quiver
        .vertex_index(&sub.vertex)
        .filter(|&v| m.dims[v] == sub.ambient)
        .ok_or_else(|| RepError::VertexMismatch(sub.vertex.clone()))?;
    if sub.dim() == 0 || sub.dim() == sub.ambient {
        return Ok(None);
    }
    let s = sub.matrix();
    for (i, f) in hom_basis(m, m)?.maps.iter().enumerate() {
        let image = f[v].mul(&s)?;
        let both = ExactMatrix::hstack(m.field, sub.ambient, &[&s, &image])?;
        if both.rank() != sub.dim() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The restriction of `m` to the arrows of `sub`, a quiver on the same vertices.
pub fn restrict<K: Field>(
    m: &Representation<K>,
    sub: &Quiver,
) -> Result<Representation<K>, RepError> {
    if sub.vertices() != m.quiver.vertices() {
        return Err(RepError::QuiverMismatch);
    }
    let maps = sub
        .arrows()
        .iter()
        .map(|a| {
            let i = m
                .quiver
                .arrow_index(&a.name)
                .filter(|&i| {
                    m.quiver.arrows()[i].source == a.source
                        && m.quiver.arrows()[i].target == a.target
                })
                .ok_or_else(|| RepError::UnknownArrow(a.name.clone()))?;
            Ok(m.maps[i].clone())
        })
        .collect::<Result<_, RepError>>()?;
    Representation::new(m.field, sub.clone(), m.dims.clone(), maps)
}

fn block_diag<K: Field>(field: K, a: &ExactMatrix<K>, b: &ExactMatrix<K>) -> ExactMatrix<K> {
    let mut out = ExactMatrix::zeros(field, a.rows() + b.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), a.cols(), b);
    out
}

pub fn direct_sum<K: Field>(
    m: &Representation<K>,
    n: &Representation<K>,
) -> Result<Representation<K>, RepError> {
    same_quiver(m, n)?;
    let dims = m.dims.iter().zip(&n.dims).map(|(a, b)| a + b).collect();
    let maps = m
        .maps
        .iter()
        .zip(&n.maps)
        .map(|(a, b)| block_diag(m.field, a, b))
        .collect();
    Representation::new(m.field, m.quiver.clone(), dims, maps)
}

/// Arrow matrices with entries drawn uniformly from `{−2, …, 2}`.
pub fn random_representation<K: Field, R: Rng + ?Sized>(
    field: K,
    quiver: &Quiver,
    dims: &[usize],
    rng: &mut R,
) -> Result<Representation<K>, RepError> {
    if dims.len() != quiver.vertex_count() {
        return Representation::new(field, quiver.clone(), dims.to_vec(), Vec::new());
    }
    let maps = quiver
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            let data = (0..r * c)
                .map(|_| field.from_i64(rng.random_range(-2..=2)))
                .collect();
            ExactMatrix::new(field, r, c, data).expect("shape")
        })
        .collect();
    Representation::new(field, quiver.clone(), dims.to_vec(), maps)
}
