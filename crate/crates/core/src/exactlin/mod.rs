//! Exact scalars and dense linear algebra over ℚ and `F_p`.

mod field;
mod idempotent;
mod matrix;

pub use field::{format_signed, Field, FieldError, FieldKind, PrimeField, Rationals};
pub use idempotent::{idempotent_diagonalize, IdempotentDecomposition};
pub use matrix::{ExactMatrix, Rref};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix data does not fit shape {rows}x{cols} (got {len})")]
    BadData {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("not a full family of orthogonal idempotents: {0}")]
    NotIdempotentFamily(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}
