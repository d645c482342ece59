//! Homomorphisms from path algebras into matrix algebras over free algebras:
//! the constructions, the ideal-criterion verifier, and the randomized
//! specialization refuter.

mod construct;
mod hom;
mod present;
mod specialize;
mod verify;

#[cfg(test)]
mod tests;

use crate::exactlin::{FieldError, LinalgError};
use crate::freealg::FreeAlgError;
use crate::quiver::QuiverError;
use crate::quiverrep::RepError;

pub use construct::{
    build_brick_hom, canonical_generic_hom, extend_add_arrows, extend_invariant,
    generation_identity_check, glue_vertex, InvariantCase,
};
pub use hom::{field_of_hom_json, AlgebraHom, LetterSite, HOM_SCHEMA};
pub use present::{
    eliminate_linear_generators, factor_through_canonical, glued_quiver, localisation_presentation,
    Connector, ConnectorDirection, Elimination, Factorization, Presentation,
};
pub use specialize::{
    specialization_refutation_test, specialize, RefutationOutcome, SpecializationReport,
    Specialized, TrialRecord, Witness,
};
pub use verify::{
    combine, default_degree_bound, linear_relations_from_end, verify_epimorphism, CertificateTerm,
    CommutatorIdeal, EpiReport, IdealReport, MembershipRecord, Verdict, REPORT_SCHEMA,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EpiError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("the representation is not a brick (End has dimension {end_dim})")]
    NotABrick { end_dim: usize },
    #[error("the representation is not exceptional")]
    NotExceptional,
    #[error("not a quiver extension: {0}")]
    QuiverNotExtension(String),
    #[error("the map of arrow `{0}` is invertible")]
    FullRank(String),
    #[error("{subspace} is not invariant under endomorphism #{endomorphism} of the restricted representation")]
    InvarianceFailure {
        subspace: String,
        endomorphism: usize,
    },
    #[error("vertex `{vertex}` has dimension {dim}; gluing needs more than 1")]
    DimensionTooSmall { vertex: String, dim: usize },
    #[error("homomorphism has no letter provenance for the generation identity")]
    WrongProvenance,
    #[error("idempotent images are not standard block projections: {0}")]
    LayoutMismatch(String),
    #[error("path for arrow `{arrow}`: {message}")]
    PathMismatch { arrow: String, message: String },
    #[error("specialization needs {expected} matrices of size {size}x{size}: {message}")]
    SizeMismatch {
        expected: usize,
        size: usize,
        message: String,
    },
    #[error("homomorphism is malformed: {0}")]
    Structure(String),
    #[error("connector endpoint `{0}` is not a vertex of its quiver")]
    EndpointMismatch(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("homomorphism file: {0}")]
    Json(String),
}
