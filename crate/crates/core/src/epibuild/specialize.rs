use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AlgebraHom, EpiError};
use crate::exactlin::{idempotent_diagonalize, ExactMatrix, Field, PrimeField};
use crate::quiver::DimVector;
use crate::quiverrep::{end_dim, Representation};

/// Prime used to screen trials before confirming over the hom's own field.
const SCREEN_PRIME: u64 = 101;

/// The `kQ`-module obtained by restricting `k^{nℓ}` along a specialized `h`.
#[derive(Debug, Clone)]
pub struct Specialized<K: Field> {
    pub rep: Representation<K>,
    pub dims: DimVector,
}

/// Substitutes `ℓ × ℓ` matrices for the letters of `h` and reads off the
/// restricted representation in coordinates adapted to the idempotents.
pub fn specialize<K: Field>(
    h: &AlgebraHom<K>,
    assignment: &[ExactMatrix<K>],
    ell: usize,
) -> Result<Specialized<K>, EpiError> {
    let expected = h.alphabet().len();
    let size_err = |message: String| EpiError::SizeMismatch {
        expected,
        size: ell,
        message,
    };
    if assignment.len() != expected {
        return Err(size_err(format!("got {} matrices", assignment.len())));
    }
    if let Some(bad) = assignment.iter().find(|m| m.shape() != (ell, ell)) {
        return Err(size_err(format!(
            "got a {}x{} matrix",
            bad.rows(),
            bad.cols()
        )));
    }
    let field = h.field();
    let q = h.quiver().clone();
    if q.vertex_count() == 0 {
        let rep = Representation::new(field, q.clone(), Vec::new(), Vec::new())?;
        return Ok(Specialized {
            rep,
            dims: DimVector::from_ordered(&q, &[])?,
        });
    }
    let idems: Vec<ExactMatrix<K>> = h
        .idempotents()
        .iter()
        .map(|e| e.evaluate(assignment, ell))
        .collect::<Result<_, _>>()?;
    let dec = idempotent_diagonalize(&idems)?;
    let dims = dec.block_ranks.clone();
    let mut maps = Vec::with_capacity(q.arrows().len());
    for (a, img) in q.arrows().iter().zip(h.arrow_images()) {
        let c = dec.conjugate(&img.evaluate(assignment, ell)?)?;
        maps.push(c.block(
            dec.offset(a.target),
            dec.offset(a.source),
            dims[a.target],
            dims[a.source],
        ));
    }
    let rep = Representation::new(field, q.clone(), dims.clone(), maps)?;
    Ok(Specialized {
        rep,
        dims: DimVector::from_ordered(&q, &dims)?,
    })
}

/// Dimension of the centralizer of `mats` in `M_ℓ(k)`.
fn centralizer_dim<K: Field>(field: K, mats: &[ExactMatrix<K>], ell: usize) -> usize {
    // Unknown Y (row-major); each A gives the ℓ² equations A·Y − Y·A = 0.
    let mut rows = Vec::new();
    for a in mats {
        for i in 0..ell {
            for j in 0..ell {
                let mut row = vec![field.zero(); ell * ell];
                for k in 0..ell {
                    let c = &mut row[k * ell + j];
                    *c = field.add(c, a.get(i, k));
                    let c = &mut row[i * ell + k];
                    *c = field.sub(c, a.get(k, j));
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return ell * ell;
    }
    let system = ExactMatrix::from_rows(field, ell * ell, rows).expect("row length");
    ell * ell - system.rank()
}

/// `(dim End_{kQ}(restriction), dim End over the target)` for one integer assignment.
fn trial_dims<K: Field>(
    h: &AlgebraHom<K>,
    ints: &[Vec<i64>],
    ell: usize,
) -> Result<(usize, usize), EpiError> {
    let field = h.field();
    if h.size() * ell == 0 {
        return Ok((0, 0));
    }
    let mats: Vec<ExactMatrix<K>> = ints
        .iter()
        .map(|v| {
            ExactMatrix::new(
                field,
                ell,
                ell,
                v.iter().map(|&x| field.from_i64(x)).collect(),
            )
        })
        .collect::<Result<_, _>>()?;
    let s = specialize(h, &mats, ell)?;
    Ok((end_dim(&s.rep)?, centralizer_dim(field, &mats, ell)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub size: usize,
    pub trial: usize,
    /// Endomorphism dimensions in the screening field.
    pub path_end_dim: usize,
    pub target_end_dim: usize,
    /// Dimensions over the homomorphism's own field, when re-checked there.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confirmed: Option<(usize, usize)>,
}

/// A reproducible specialization whose endomorphism rings differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub size: usize,
    pub trial: usize,
    /// Integer entries (row-major) substituted for each letter.
    pub assignment: Vec<(String, Vec<i64>)>,
    pub path_end_dim: usize,
    pub target_end_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", content = "witness", rename_all = "snake_case")]
pub enum RefutationOutcome {
    /// No trial separated the endomorphism rings.
    Pass,
    Refuted(Witness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationReport {
    pub seed: u64,
    pub trials_per_size: usize,
    pub sizes: Vec<usize>,
    pub screening_field: String,
    pub outcome: RefutationOutcome,
    pub trials: Vec<TrialRecord>,
}

/// Randomized necessary-condition test: for an epimorphism, restricting the
/// simple `M_n(B)`-module `k^{nℓ}` cannot enlarge its endomorphism ring.
///
/// Letters get independent `ℓ × ℓ` integer matrices with entries in
/// `{−2, …, 2}` from a ChaCha8 stream seeded with `seed`, for each size
/// in `sizes` (outer loop) and `trials` draws per size. Trials are screened
/// over `F_101` and any strict inequality is re-checked over `h`'s field
/// before it is reported.
pub fn specialization_refutation_test<K: Field>(
    h: &AlgebraHom<K>,
    trials: usize,
    sizes: &[usize],
    seed: u64,
) -> Result<SpecializationReport, EpiError> {
    let screen_field = PrimeField::new(SCREEN_PRIME)?;
    let own_is_screen = h.field().kind() == screen_field.kind();
    let screened = if own_is_screen {
        None
    } else {
        h.map_field(screen_field, |c| h.field().reduce_into(c, screen_field))
    };
    let screening_field = match &screened {
        Some(_) => format!("fp:{SCREEN_PRIME}"),
        None => h.field().kind().to_string(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = h.alphabet().letters();
    let mut records = Vec::new();
    let mut outcome = RefutationOutcome::Pass;
    'outer: for &ell in sizes {
        for trial in 0..trials {
            let ints: Vec<Vec<i64>> = letters
                .iter()
                .map(|_| (0..ell * ell).map(|_| rng.random_range(-2..=2)).collect())
                .collect();
            let (path, target) = match &screened {
                Some(s) => trial_dims(s, &ints, ell)?,
                None => trial_dims(h, &ints, ell)?,
            };
            let mut record = TrialRecord {
                size: ell,
                trial,
                path_end_dim: path,
                target_end_dim: target,
                confirmed: None,
            };
            let mut hit = path > target;
            let mut dims = (path, target);
            if hit && screened.is_some() {
                dims = trial_dims(h, &ints, ell)?;
                record.confirmed = Some(dims);
                hit = dims.0 > dims.1;
            }
            log::trace!("specialization size {ell} trial {trial}: End dims {dims:?}");
            records.push(record);
            if hit {
                outcome = RefutationOutcome::Refuted(Witness {
                    size: ell,
                    trial,
                    assignment: letters.iter().cloned().zip(ints).collect(),
                    path_end_dim: dims.0,
                    target_end_dim: dims.1,
                });
                break 'outer;
            }
        }
    }
    Ok(SpecializationReport {
        seed,
        trials_per_size: trials,
        sizes: sizes.to_vec(),
        screening_field,
        outcome,
        trials: records,
    })
}
