pub mod epibuild;
pub mod exactlin;
pub mod freealg;
pub mod quiver;
pub mod quiverrep;

pub use epibuild::{AlgebraHom, EpiError, EpiReport, Verdict};
pub use exactlin::{ExactMatrix, Field, FieldKind, PrimeField, Rationals};
pub use freealg::{Alphabet, FreeMat, FreePoly, IdealGens, Word};
pub use quiver::{DimVector, Quiver};
pub use quiverrep::Representation;
