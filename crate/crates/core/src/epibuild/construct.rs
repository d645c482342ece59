use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{AlgebraHom, EpiError, LetterSite};
use crate::exactlin::{ExactMatrix, Field};
use crate::freealg::{Alphabet, FreeMat, FreePoly};
use crate::quiver::{BlockLayout, DimVector, Quiver, QuiverError};
use crate::quiverrep::{
    complement, end_dim, ext1_dim, invariance_witness, kernel_image, restrict, RepError,
    Representation, Subspace,
};

fn layout(q: &Quiver, dims: Vec<usize>) -> BlockLayout {
    BlockLayout::from_dims(q.vertices().to_vec(), dims)
}

fn block_idempotents<K: Field>(
    field: K,
    alphabet: &Arc<Alphabet>,
    l: &BlockLayout,
) -> Vec<FreeMat<K>> {
    (0..l.dims.len())
        .map(|v| {
            let mut m = FreeMat::zeros(field, alphabet, l.total, l.total);
            for i in l.range(v) {
                m.set(i, i, FreePoly::one(field, alphabet));
            }
            m
        })
        .collect()
}

/// `block` placed at `(r0, c0)` of an otherwise zero `n × n` matrix.
fn placed<K: Field>(
    alphabet: &Arc<Alphabet>,
    n: usize,
    r0: usize,
    c0: usize,
    block: &ExactMatrix<K>,
) -> FreeMat<K> {
    let mut m = FreeMat::zeros(block.field(), alphabet, n, n);
    m.set_block(r0, c0, &FreeMat::from_scalar(alphabet, block));
    m
}

fn letter_name(prefix: &str, arrow: &str, i: usize, j: usize) -> String {
    format!("{prefix}_{arrow}_{}_{}", i + 1, j + 1)
}

/// Fresh letters for a `rows × cols` block of arrow `arrow` at global `(r0, c0)`.
#[allow(clippy::too_many_arguments)]
fn letter_block(
    prefix: &str,
    arrow: &str,
    rows: usize,
    cols: usize,
    r0: usize,
    c0: usize,
    letters: &mut Vec<String>,
    sites: &mut Vec<LetterSite>,
) {
    for i in 0..rows {
        for j in 0..cols {
            let letter = letter_name(prefix, arrow, i, j);
            letters.push(letter.clone());
            sites.push(LetterSite {
                letter,
                arrow: arrow.to_string(),
                row: r0 + i,
                col: c0 + j,
            });
        }
    }
}

/// Adds `x · E_{row,col}` to `m` for every site of `arrow`.
fn add_sites<K: Field>(
    field: K,
    alphabet: &Arc<Alphabet>,
    m: &mut FreeMat<K>,
    arrow: &str,
    sites: &[LetterSite],
) -> Result<(), EpiError> {
    for s in sites.iter().filter(|s| s.arrow == arrow) {
        let x = FreePoly::letter(field, alphabet, &s.letter)?;
        let cur = m.get(s.row, s.col).add(&x)?;
        m.set(s.row, s.col, cur);
    }
    Ok(())
}

fn require_brick<K: Field>(m: &Representation<K>) -> Result<(), EpiError> {
    if m.total_dim() == 0 {
        return Err(RepError::ZeroModule.into());
    }
    let end = end_dim(m)?;
    if end != 1 {
        return Err(EpiError::NotABrick { end_dim: end });
    }
    Ok(())
}

/// The action map `kQ → M_n(k)` of `m`: `e_v` ↦ coordinate projection of
/// `v`'s block, `e ↦ φ_e` in block `(t(e), s(e))`.
///
/// Non-bricks are rejected unless `allow_non_brick`, in which case the hom
/// carries a note saying so.
pub fn build_brick_hom<K: Field>(
    m: &Representation<K>,
    allow_non_brick: bool,
) -> Result<AlgebraHom<K>, EpiError> {
    if m.total_dim() == 0 {
        return Err(RepError::ZeroModule.into());
    }
    let end = end_dim(m)?;
    if end != 1 && !allow_non_brick {
        return Err(EpiError::NotABrick { end_dim: end });
    }
    let field = m.field();
    let q = m.quiver();
    let alphabet = Alphabet::empty();
    let l = layout(q, m.dims().to_vec());
    let arrows = q
        .arrows()
        .iter()
        .zip(m.maps())
        .map(|(a, phi)| {
            placed(
                &alphabet,
                l.total,
                l.offsets[a.target],
                l.offsets[a.source],
                phi,
            )
        })
        .collect();
    let h = AlgebraHom::new(
        field,
        q.clone(),
        alphabet.clone(),
        l.total,
        block_idempotents(field, &alphabet, &l),
        arrows,
    )?;
    Ok(if end != 1 {
        h.with_note(format!(
            "not a brick: End has dimension {end}; built on request"
        ))
    } else {
        h
    })
}

/// Checks `q` is an acyclic quiver on `base`'s vertices containing all of
/// `base`'s arrows, and returns the indices of the arrows `q` adds.
fn new_arrows(base: &Quiver, q: &Quiver) -> Result<Vec<usize>, EpiError> {
    if let Some(cycle) = q.find_cycle() {
        return Err(QuiverError::Cycle(cycle).into());
    }
    let mut a: Vec<&String> = base.vertices().iter().collect();
    let mut b: Vec<&String> = q.vertices().iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err(EpiError::QuiverNotExtension("vertex sets differ".into()));
    }
    for arrow in base.arrows() {
        let ok = q.arrow(&arrow.name).is_some_and(|x| {
            q.source_name(x) == base.source_name(arrow)
                && q.target_name(x) == base.target_name(arrow)
        });
        if !ok {
            return Err(EpiError::QuiverNotExtension(format!(
                "arrow `{}` missing or moved",
                arrow.name
            )));
        }
    }
    Ok((0..q.arrows().len())
        .filter(|&i| base.arrow_index(&q.arrows()[i].name).is_none())
        .collect())
}

/// Dimensions of `m` listed in `q`'s vertex order (same vertex set).
fn dims_in(m: &Representation<impl Field>, q: &Quiver) -> Vec<usize> {
    q.vertices()
        .iter()
        .map(|v| m.dims()[m.quiver().vertex_index(v).expect("same vertex set")])
        .collect()
}

/// Extends the action map of `m` over `kQ` to `kQ'` by sending each new
/// arrow `e` to a full block of fresh letters `x_e_i_j` at `(t(e), s(e))`.
///
/// Bricks with self-extensions are accepted; the result then carries a note
/// that it is only an epimorphism candidate, not a universal localisation.
pub fn extend_add_arrows<K: Field>(
    m: &Representation<K>,
    q_prime: &Quiver,
) -> Result<AlgebraHom<K>, EpiError> {
    let added = new_arrows(m.quiver(), q_prime)?;
    require_brick(m)?;
    let self_ext = ext1_dim(m, m)?;
    let field = m.field();
    let l = layout(q_prime, dims_in(m, q_prime));

    let mut letters = Vec::new();
    let mut sites = Vec::new();
    for &i in &added {
        let a = &q_prime.arrows()[i];
        let (t, s) = (a.target, a.source);
        letter_block(
            "x",
            &a.name,
            l.dims[t],
            l.dims[s],
            l.offsets[t],
            l.offsets[s],
            &mut letters,
            &mut sites,
        );
    }
    let alphabet = Alphabet::new(&letters)?;

    let mut arrows = Vec::with_capacity(q_prime.arrows().len());
    for a in q_prime.arrows() {
        let (t, s) = (a.target, a.source);
        let img = match m.map(&a.name) {
            Some(phi) => placed(&alphabet, l.total, l.offsets[t], l.offsets[s], phi),
            None => {
                let mut img = FreeMat::zeros(field, &alphabet, l.total, l.total);
                add_sites(field, &alphabet, &mut img, &a.name, &sites)?;
                img
            }
        };
        arrows.push(img);
    }
    let idems = block_idempotents(field, &alphabet, &l);
    let h = AlgebraHom::new(field, q_prime.clone(), alphabet, l.total, idems, arrows)?
        .with_sites(sites)?;
    Ok(if self_ext > 0 {
        h.with_note(format!(
            "brick with dim Ext^1(M, M) = {self_ext}: ring epimorphism candidate, not a universal localisation"
        ))
    } else {
        h
    })
}

/// Checks, for every letter site `(x, e, r, c)`, the matrix identity
/// `x · I = Σ_i E_{i,r} · h(e) · E_{c,i}` by explicit multiplication.
pub fn generation_identity_check<K: Field>(h: &AlgebraHom<K>) -> Result<bool, EpiError> {
    let alphabet = h.alphabet();
    if alphabet.is_empty() {
        return Ok(true);
    }
    let sites = h.letter_sites();
    if alphabet
        .letters()
        .iter()
        .any(|x| !sites.iter().any(|s| &s.letter == x))
    {
        return Err(EpiError::WrongProvenance);
    }
    let (field, n) = (h.field(), h.size());
    for s in sites {
        let img = h
            .arrow_image(&s.arrow)
            .ok_or_else(|| EpiError::UnknownArrow(s.arrow.clone()))?;
        let mut sum = FreeMat::zeros(field, alphabet, n, n);
        for i in 0..n {
            let term = FreeMat::unit(field, alphabet, n, i, s.row)
                .mul(img)?
                .mul(&FreeMat::unit(field, alphabet, n, s.col, i))?;
            sum = sum.add(&term)?;
        }
        let x = FreePoly::letter(field, alphabet, &s.letter)?;
        if sum != FreeMat::identity(field, alphabet, n).left_mul_poly(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which indeterminate blocks the new arrow's image receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantCase {
    /// `X21` only.
    I,
    /// `X11` and `X21`; needs the source complement invariant.
    II,
    /// `X21` and `X22`; needs the target complement invariant.
    III,
    /// All three blocks; needs both complements invariant.
    IV,
}

impl InvariantCase {
    fn x11(self) -> bool {
        matches!(self, InvariantCase::II | InvariantCase::IV)
    }

    fn x22(self) -> bool {
        matches!(self, InvariantCase::III | InvariantCase::IV)
    }
}

impl FromStr for InvariantCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(InvariantCase::I),
            "ii" | "2" => Ok(InvariantCase::II),
            "iii" | "3" => Ok(InvariantCase::III),
            "iv" | "4" => Ok(InvariantCase::IV),
            _ => Err(format!("unknown case `{s}` (expected i, ii, iii or iv)")),
        }
    }
}

impl fmt::Display for InvariantCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantCase::I => "i",
            InvariantCase::II => "ii",
            InvariantCase::III => "iii",
            InvariantCase::IV => "iv",
        })
    }
}

fn require_invariant<K: Field>(
    m: &Representation<K>,
    sub: &Subspace<K>,
    label: String,
) -> Result<(), EpiError> {
    match invariance_witness(m, sub)? {
        None => Ok(()),
        Some(endomorphism) => Err(EpiError::InvarianceFailure {
            subspace: label,
            endomorphism,
        }),
    }
}

/// The invariant-subspace extension along the arrow `e_prime` of `m_prime`.
///
/// Source and target spaces of `e_prime` are re-coordinatized as
/// `Ker ⊕ C_s` and `Im ⊕ C_t` with the greedy complements, so that
/// `φ = [[0, φ̄], [0, 0]]`; every other arrow map is conjugated accordingly.
/// Letters: `x11_e_i_j` (Im × Ker), `x21_e_i_j` (C_t × Ker), `x22_e_i_j` (C_t × C_s).
pub fn extend_invariant<K: Field>(
    m_prime: &Representation<K>,
    e_prime: &str,
    case: InvariantCase,
) -> Result<AlgebraHom<K>, EpiError> {
    require_brick(m_prime)?;
    let field = m_prime.field();
    let q_prime = m_prime.quiver();
    let e = q_prime
        .arrow_index(e_prime)
        .ok_or_else(|| EpiError::UnknownArrow(e_prime.to_string()))?;
    let arrow = &q_prime.arrows()[e];
    let phi = &m_prime.maps()[e];
    if phi.is_square() && phi.rows() > 0 && phi.rank() == phi.rows() {
        return Err(EpiError::FullRank(e_prime.to_string()));
    }

    let rest: Vec<(&str, &str, &str)> = q_prime
        .arrows()
        .iter()
        .filter(|a| a.name != e_prime)
        .map(|a| {
            (
                a.name.as_str(),
                q_prime.source_name(a),
                q_prime.target_name(a),
            )
        })
        .collect();
    let vertices: Vec<&str> = q_prime.vertices().iter().map(String::as_str).collect();
    let q = Quiver::new(&vertices, &rest)?;
    let m = restrict(m_prime, &q)?;

    let (ker, im) = kernel_image(m_prime, e_prime)?;
    require_invariant(&m, &ker, format!("Ker φ_{e_prime}"))?;
    require_invariant(&m, &im, format!("Im φ_{e_prime}"))?;
    let c_s = complement(&ker, ker.ambient())?;
    let c_t = complement(&im, im.ambient())?;
    if case.x11() {
        require_invariant(&m, &c_s, format!("complement of Ker φ_{e_prime}"))?;
    }
    if case.x22() {
        require_invariant(&m, &c_t, format!("complement of Im φ_{e_prime}"))?;
    }

    let (s, t) = (arrow.source, arrow.target);
    let mut basis: Vec<ExactMatrix<K>> = m_prime
        .dims()
        .iter()
        .map(|&d| ExactMatrix::identity(field, d))
        .collect();
    let cols = |a: &Subspace<K>, b: &Subspace<K>| {
        let mut v = a.basis().to_vec();
        v.extend(b.basis().iter().cloned());
        ExactMatrix::from_columns(field, a.ambient(), &v)
    };
    basis[s] = cols(&ker, &c_s);
    basis[t] = cols(&im, &c_t);
    let inverse: Vec<ExactMatrix<K>> = basis
        .iter()
        .map(|p| p.inverse())
        .collect::<Result<_, _>>()?;

    let l = layout(q_prime, m_prime.dims().to_vec());
    let (os, ot) = (l.offsets[s], l.offsets[t]);
    let (dk, di) = (ker.dim(), im.dim());
    let mut letters = Vec::new();
    let mut sites = Vec::new();
    if case.x11() {
        letter_block("x11", e_prime, di, dk, ot, os, &mut letters, &mut sites);
    }
    letter_block(
        "x21",
        e_prime,
        c_t.dim(),
        dk,
        ot + di,
        os,
        &mut letters,
        &mut sites,
    );
    if case.x22() {
        letter_block(
            "x22",
            e_prime,
            c_t.dim(),
            c_s.dim(),
            ot + di,
            os + dk,
            &mut letters,
            &mut sites,
        );
    }
    let alphabet = Alphabet::new(&letters)?;

    let mut arrows = Vec::with_capacity(q_prime.arrows().len());
    for (a, phi_a) in q_prime.arrows().iter().zip(m_prime.maps()) {
        let block = inverse[a.target].mul(phi_a)?.mul(&basis[a.source])?;
        let mut img = placed(
            &alphabet,
            l.total,
            l.offsets[a.target],
            l.offsets[a.source],
            &block,
        );
        if a.name == e_prime {
            add_sites(field, &alphabet, &mut img, e_prime, &sites)?;
        }
        arrows.push(img);
    }
    let idems = block_idempotents(field, &alphabet, &l);
    AlgebraHom::new(field, q_prime.clone(), alphabet, l.total, idems, arrows)?.with_sites(sites)
}

fn fresh_name(taken: impl Fn(&str) -> bool, base: &str) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Glues a new source vertex `w'` onto `w` with one arrow `e': w' → w`.
///
/// The target is `M_{n+1}(k⟨x_1, …, x_{m−1}⟩)`; `g(e')` has last column
/// `1, x_1, …, x_{m−1}` on `w`'s block rows (in layout order) and zeros elsewhere.
pub fn glue_vertex<K: Field>(m: &Representation<K>, w: &str) -> Result<AlgebraHom<K>, EpiError> {
    let q = m.quiver();
    let wi = q
        .vertex_index(w)
        .ok_or_else(|| EpiError::UnknownVertex(w.to_string()))?;
    require_brick(m)?;
    let dim = m.dims()[wi];
    if dim <= 1 {
        return Err(EpiError::DimensionTooSmall {
            vertex: w.to_string(),
            dim,
        });
    }
    let field = m.field();
    let w_new = fresh_name(|x| q.vertex_index(x).is_some(), &format!("{w}'"));
    let e_new = fresh_name(|x| q.arrow_index(x).is_some(), "e'");
    let mut vertices = q.vertices().to_vec();
    vertices.push(w_new.clone());
    let mut arrows: Vec<(String, String, String)> = q
        .arrows()
        .iter()
        .map(|a| {
            (
                a.name.clone(),
                q.source_name(a).to_string(),
                q.target_name(a).to_string(),
            )
        })
        .collect();
    arrows.push((e_new.clone(), w_new, w.to_string()));
    let q_new = Quiver::new(&vertices, &arrows)?;

    let letters: Vec<String> = (1..dim).map(|i| format!("x_{i}")).collect();
    let alphabet = Alphabet::new(&letters)?;
    let l = layout(q, m.dims().to_vec());
    let n = l.total + 1;

    let dims_new: Vec<usize> = m.dims().iter().copied().chain([1]).collect();
    let idems = block_idempotents(field, &alphabet, &layout(&q_new, dims_new));
    let mut images: Vec<FreeMat<K>> = q
        .arrows()
        .iter()
        .zip(m.maps())
        .map(|(a, phi)| placed(&alphabet, n, l.offsets[a.target], l.offsets[a.source], phi))
        .collect();
    let mut glue = FreeMat::zeros(field, &alphabet, n, n);
    let w0 = l.offsets[wi];
    glue.set(w0, n - 1, FreePoly::one(field, &alphabet));
    for (k, x) in letters.iter().enumerate() {
        glue.set(w0 + k + 1, n - 1, FreePoly::letter(field, &alphabet, x)?);
    }
    images.push(glue);
    AlgebraHom::new(field, q_new, alphabet, n, idems, images)
}

/// The generic map `q_{Q,α}`: every arrow to its full block of letters
/// `x_e_i_j`, every vertex to its block identity.
pub fn canonical_generic_hom<K: Field>(
    field: K,
    q: &Quiver,
    alpha: &DimVector,
) -> Result<AlgebraHom<K>, EpiError> {
    let l = layout(q, alpha.in_order(q)?);
    let mut letters = Vec::new();
    let mut sites = Vec::new();
    for a in q.arrows() {
        let (t, s) = (a.target, a.source);
        letter_block(
            "x",
            &a.name,
            l.dims[t],
            l.dims[s],
            l.offsets[t],
            l.offsets[s],
            &mut letters,
            &mut sites,
        );
    }
    let alphabet = Alphabet::new(&letters)?;
    let mut arrows = Vec::with_capacity(q.arrows().len());
    for a in q.arrows() {
        let mut img = FreeMat::zeros(field, &alphabet, l.total, l.total);
        add_sites(field, &alphabet, &mut img, &a.name, &sites)?;
        arrows.push(img);
    }
    let idems = block_idempotents(field, &alphabet, &l);
    AlgebraHom::new(field, q.clone(), alphabet, l.total, idems, arrows)?.with_sites(sites)
}
