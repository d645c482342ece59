use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::specialize::{RefutationOutcome, SpecializationReport, Witness};
use super::{AlgebraHom, EpiError};
use crate::exactlin::{ExactMatrix, Field, FieldKind};
use crate::freealg::{Alphabet, FreeMat, FreePoly, IdealGens, IdealSpan, MembershipResult, Word};
use crate::quiverrep::{hom_basis, Representation};

/// Version tag written into verification reports.
pub const REPORT_SCHEMA: u32 = 1;

/// The ideal `I` of `k⟨X, v_ij⟩` generated by the entries of
/// `V·h(g) − h(g)·V` for all algebra generators `g`, where `V = (v_ij)`.
///
/// Vertices and arrows suffice: `[V, ab] = [V, a]·b + a·[V, b]`.
#[derive(Debug, Clone)]
pub struct CommutatorIdeal<K: Field> {
    /// `h`'s letters followed by `prefix_i_j` (1-based, row-major).
    pub alphabet: Arc<Alphabet>,
    pub prefix: String,
    pub size: usize,
    pub ideal: IdealGens<K>,
}

impl<K: Field> CommutatorIdeal<K> {
    pub fn new(h: &AlgebraHom<K>) -> Result<Self, EpiError> {
        let field = h.field();
        let n = h.size();
        let prefix = h.alphabet().fresh_prefix("v");
        let v_names: Vec<String> = (0..n * n)
            .map(|k| format!("{prefix}_{}_{}", k / n + 1, k % n + 1))
            .collect();
        let alphabet = h.alphabet().extended(&v_names)?;
        let mut v = FreeMat::zeros(field, &alphabet, n, n);
        for (k, name) in v_names.iter().enumerate() {
            v.set(k / n, k % n, FreePoly::letter(field, &alphabet, name)?);
        }
        let mut gens: Vec<FreePoly<K>> = Vec::new();
        for g in h.generator_images() {
            let g = g.embed(&alphabet)?;
            let c = v.mul(&g)?.sub(&g.mul(&v)?)?;
            for (_, _, p) in c.nonzero_entries() {
                // Monic, so that generators equal up to a scalar appear once.
                let (_, lc) = p.leading().expect("nonzero");
                let p = p.scale(&field.inv(lc).expect("nonzero leading coefficient"));
                if !gens.contains(&p) {
                    gens.push(p);
                }
            }
        }
        let ideal = IdealGens::new(field, &alphabet, gens)?;
        Ok(CommutatorIdeal {
            alphabet,
            prefix,
            size: n,
            ideal,
        })
    }

    /// The letter `v_{i+1, j+1}` (0-based arguments).
    pub fn v(&self, i: usize, j: usize) -> FreePoly<K> {
        let name = format!("{}_{}_{}", self.prefix, i + 1, j + 1);
        FreePoly::letter(self.ideal.field(), &self.alphabet, &name).expect("v letter")
    }

    /// Elements whose membership in `I` certifies an epimorphism:
    /// `v_ii − v_jj`, `v_ij` (i ≠ j) and `x·v_11 − v_11·x` for each letter `x` of `h`.
    pub fn required(&self) -> Vec<FreePoly<K>> {
        let n = self.size;
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.v(i, i).sub(&self.v(j, j)).expect("same alphabet"));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push(self.v(i, j));
                }
            }
        }
        let v11 = self.v(0, 0);
        let field = self.ideal.field();
        for x in self
            .alphabet
            .letters()
            .iter()
            .filter(|l| !is_v_letter(&self.prefix, l))
        {
            let x = FreePoly::letter(field, &self.alphabet, x).expect("letter");
            out.push(x.mul(&v11).unwrap().sub(&v11.mul(&x).unwrap()).unwrap());
        }
        out
    }

    /// `2 + max generator degree + max degree of a required element`.
    pub fn default_bound(&self) -> usize {
        let gen = self
            .ideal
            .generators()
            .iter()
            .filter_map(FreePoly::degree)
            .max()
            .unwrap_or(0);
        let req = self
            .required()
            .iter()
            .filter_map(FreePoly::degree)
            .max()
            .unwrap_or(0);
        2 + gen + req
    }
}

/// Degree bound used by `verify` when none is given.
pub fn default_degree_bound<K: Field>(h: &AlgebraHom<K>) -> Result<usize, EpiError> {
    Ok(CommutatorIdeal::new(h)?.default_bound())
}

fn is_v_letter(prefix: &str, l: &str) -> bool {
    l.strip_prefix(prefix)
        .and_then(|r| r.strip_prefix('_'))
        .is_some_and(|r| {
            r.split('_').count() == 2 && r.split('_').all(|p| p.parse::<usize>().is_ok())
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub coef: String,
    pub left: String,
    pub generator: usize,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipRecord {
    pub element: String,
    pub member: bool,
    /// Span degree at which membership was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub certificate: Vec<CertificateTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// Every required element lies in the ideal, certified up to `degree`.
    Verified { degree: usize },
    /// A specialization with mismatched endomorphism rings.
    Refuted { witness: Witness },
    /// Some required element was not found up to `degree_bound`.
    Undetermined { degree_bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealReport {
    pub degree_bound: usize,
    pub letters: Vec<String>,
    pub generators: Vec<String>,
    pub required: Vec<MembershipRecord>,
    pub verdict: Verdict,
}

fn render_word(w: &Word, alphabet: &Alphabet) -> String {
    if w.degree() == 0 {
        "1".into()
    } else {
        w.render(alphabet)
    }
}

/// Checks membership of every required element of the commutator ideal up
/// to total degree `bound`.
pub fn verify_epimorphism<K: Field>(
    h: &AlgebraHom<K>,
    bound: usize,
) -> Result<IdealReport, EpiError> {
    let ci = CommutatorIdeal::new(h)?;
    let field = h.field();
    let mut span = IdealSpan::new(ci.ideal.clone());
    let mut required = Vec::new();
    let mut worst = 0;
    let mut all = true;
    for target in ci.required() {
        let element = target.to_text();
        let found = if target.degree().unwrap_or(0) > bound {
            MembershipResult::NotFoundUpTo(bound)
        } else {
            span.membership(&target, bound)?
        };
        let record = match found {
            MembershipResult::Member {
                degree,
                certificate,
            } => {
                worst = worst.max(degree);
                MembershipRecord {
                    element,
                    member: true,
                    degree: Some(degree),
                    certificate: certificate
                        .iter()
                        .map(|t| CertificateTerm {
                            coef: field.format(&t.coef),
                            left: render_word(&t.left, &ci.alphabet),
                            generator: t.generator,
                            right: render_word(&t.right, &ci.alphabet),
                        })
                        .collect(),
                }
            }
            MembershipResult::NotFoundUpTo(_) => {
                all = false;
                MembershipRecord {
                    element,
                    member: false,
                    degree: None,
                    certificate: Vec::new(),
                }
            }
        };
        required.push(record);
    }
    let verdict = if all {
        Verdict::Verified { degree: worst }
    } else {
        Verdict::Undetermined {
            degree_bound: bound,
        }
    };
    Ok(IdealReport {
        degree_bound: bound,
        letters: ci.alphabet.letters().to_vec(),
        generators: ci
            .ideal
            .generators()
            .iter()
            .map(FreePoly::to_text)
            .collect(),
        required,
        verdict,
    })
}

/// Refuted dominates; otherwise the ideal check decides.
pub fn combine(ideal: &Verdict, specialization: Option<&RefutationOutcome>) -> Verdict {
    match specialization {
        Some(RefutationOutcome::Refuted(w)) => Verdict::Refuted { witness: w.clone() },
        _ => match ideal {
            Verdict::Verified { degree } => Verdict::Verified { degree: *degree },
            Verdict::Refuted { witness } => Verdict::Refuted {
                witness: witness.clone(),
            },
            Verdict::Undetermined { degree_bound } => Verdict::Undetermined {
                degree_bound: *degree_bound,
            },
        },
    }
}

/// Everything `verify` reports about one homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiReport {
    pub schema: u32,
    pub field: FieldKind,
    pub size: usize,
    pub letters: Vec<String>,
    pub verdict: Verdict,
    pub ideal: IdealReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specialization: Option<SpecializationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl EpiReport {
    pub fn new<K: Field>(
        h: &AlgebraHom<K>,
        ideal: IdealReport,
        specialization: Option<SpecializationReport>,
    ) -> Self {
        let verdict = combine(&ideal.verdict, specialization.as_ref().map(|s| &s.outcome));
        EpiReport {
            schema: REPORT_SCHEMA,
            field: h.field().kind(),
            size: h.size(),
            letters: h.alphabet().letters().to_vec(),
            verdict,
            ideal,
            specialization,
            notes: h.notes().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Linear relations `Σ λ_ij v_ij` vanishing on every endomorphism of `m`,
/// viewed as block-diagonal `n × n` matrices; a basis, over the alphabet
/// `v_1_1, …, v_n_n`.
pub fn linear_relations_from_end<K: Field>(
    m: &Representation<K>,
) -> Result<Vec<FreePoly<K>>, EpiError> {
    let field = m.field();
    let n = m.total_dim();
    let names: Vec<String> = (0..n * n)
        .map(|k| format!("v_{}_{}", k / n + 1, k % n + 1))
        .collect();
    let alphabet = Alphabet::new(&names)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut offsets = Vec::with_capacity(m.dims().len());
    let mut acc = 0;
    for d in m.dims() {
        offsets.push(acc);
        acc += d;
    }
    let rows: Vec<Vec<K::Elem>> = hom_basis(m, m)?
        .maps
        .iter()
        .map(|f| {
            let mut full = ExactMatrix::zeros(field, n, n);
            for (block, &o) in f.iter().zip(&offsets) {
                full.set_block(o, o, block);
            }
            full.entries().to_vec()
        })
        .collect();
    let evaluation = ExactMatrix::from_rows(field, n * n, rows)?;
    Ok(evaluation
        .nullspace_basis()
        .into_iter()
        .map(|lambda| {
            let mut p = FreePoly::zero(field, &alphabet);
            for (k, c) in lambda.iter().enumerate() {
                if *c != field.zero() {
                    p = p
                        .add(&FreePoly::monomial(
                            field,
                            &alphabet,
                            Word(vec![k as u32]),
                            c.clone(),
                        ))
                        .expect("same alphabet");
                }
            }
            p
        })
        .collect())
}
