use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::construct::canonical_generic_hom;
use super::{AlgebraHom, EpiError};
use crate::exactlin::{ExactMatrix, Field};
use crate::freealg::{Alphabet, FreeMat, FreePoly, IdealGens, Word};
use crate::quiver::{BlockLayout, DimVector, Quiver};
use crate::quiverrep::{is_exceptional, Representation};

/// `h = (q_{Q,α} followed by letter substitution)`.
#[derive(Debug, Clone)]
pub struct Factorization<K: Field> {
    pub canonical: AlgebraHom<K>,
    /// Image of each canonical letter, in the canonical alphabet's order,
    /// as a polynomial over `h`'s alphabet.
    pub images: Vec<(String, FreePoly<K>)>,
}

/// Reads the dimension vector off `h`'s idempotents, which must be the
/// consecutive 0/1 block projections in vertex order.
fn standard_dims<K: Field>(h: &AlgebraHom<K>) -> Result<Vec<usize>, EpiError> {
    let field = h.field();
    let n = h.size();
    let mut dims = Vec::new();
    let mut offset = 0;
    for (v, e) in h.quiver().vertices().iter().zip(h.idempotents()) {
        let mismatch = || EpiError::LayoutMismatch(format!("image of `{v}`"));
        let e = e.as_scalar().ok_or_else(mismatch)?;
        let rank = (0..n).filter(|&i| field.is_one(e.get(i, i))).count();
        let mut expected = ExactMatrix::zeros(field, n, n);
        for i in offset..(offset + rank).min(n) {
            expected.set(i, i, field.one());
        }
        if e != expected {
            return Err(mismatch());
        }
        dims.push(rank);
        offset += rank;
    }
    Ok(dims)
}

/// Writes `h` as `q_{Q,α}` followed by the substitution `x_e_i_j ↦ h(e)[i][j]`.
pub fn factor_through_canonical<K: Field>(h: &AlgebraHom<K>) -> Result<Factorization<K>, EpiError> {
    let field = h.field();
    let q = h.quiver();
    let dims = standard_dims(h)?;
    let alpha = DimVector::from_ordered(q, &dims)?;
    let canonical = canonical_generic_hom(field, q, &alpha)?;
    let ca = canonical.alphabet();
    let mut by_letter: BTreeMap<&str, FreePoly<K>> = BTreeMap::new();
    for s in canonical.letter_sites() {
        let img = h.arrow_image(&s.arrow).expect("same quiver");
        by_letter.insert(&s.letter, img.get(s.row, s.col).clone());
    }
    let images: Vec<FreePoly<K>> = ca
        .letters()
        .iter()
        .map(|l| by_letter[l.as_str()].clone())
        .collect();
    for (c, g) in canonical.generator_images().zip(h.generator_images()) {
        if c.substitute(h.alphabet(), &images)? != *g {
            return Err(EpiError::LayoutMismatch(
                "arrow image leaves its (t, s) block".into(),
            ));
        }
    }
    let images = ca.letters().iter().cloned().zip(images).collect();
    Ok(Factorization { canonical, images })
}

/// `q_{Q',α}` with the relations `q(p) = ι f(a)` of a localisation.
#[derive(Debug, Clone)]
pub struct Presentation<K: Field> {
    pub canonical: AlgebraHom<K>,
    /// Nonzero entries of `q(path_a) − ι f(a)` for each arrow `a` of `Q`.
    pub ideal: IdealGens<K>,
    /// `"a[i,j]"` for each generator, 1-based.
    pub sources: Vec<String>,
}

/// Dimensions and maps of `m` laid out in `q`'s vertex order.
fn layout_in<K: Field>(m: &Representation<K>, q: &Quiver) -> Result<BlockLayout, EpiError> {
    let mut dims = Vec::with_capacity(q.vertex_count());
    for v in q.vertices() {
        let i = m.quiver().vertex_index(v).ok_or_else(|| {
            EpiError::QuiverNotExtension(format!("vertex `{v}` not in the source quiver"))
        })?;
        dims.push(m.dims()[i]);
    }
    if q.vertex_count() != m.quiver().vertex_count() {
        return Err(EpiError::QuiverNotExtension("vertex sets differ".into()));
    }
    Ok(BlockLayout::from_dims(q.vertices().to_vec(), dims))
}

/// Presentation of `kQ' → M_n(k⟨X⟩)` for an exceptional `M` over `Q` and an
/// embedding sending each arrow `a` of `Q` to a path of `Q'`, listed in
/// traversal order (first arrow first).
pub fn localisation_presentation<K: Field>(
    q_prime: &Quiver,
    embedding: &BTreeMap<String, Vec<String>>,
    m: &Representation<K>,
) -> Result<Presentation<K>, EpiError> {
    let q = m.quiver();
    let l = layout_in(m, q_prime)?;
    for key in embedding.keys() {
        if q.arrow_index(key).is_none() {
            return Err(EpiError::UnknownArrow(key.clone()));
        }
    }
    for a in q.arrows() {
        let path = embedding
            .get(&a.name)
            .ok_or_else(|| EpiError::PathMismatch {
                arrow: a.name.clone(),
                message: "no path given".into(),
            })?;
        check_path(q_prime, &a.name, q.source_name(a), q.target_name(a), path)?;
    }
    if !is_exceptional(m)? {
        return Err(EpiError::NotExceptional);
    }

    let field = m.field();
    let alpha = DimVector::from_ordered(q_prime, &l.dims)?;
    let canonical = canonical_generic_hom(field, q_prime, &alpha)?;
    let alphabet = canonical.alphabet().clone();
    let n = l.total;
    let mut gens = Vec::new();
    let mut sources = Vec::new();
    for (a, phi) in q.arrows().iter().zip(m.maps()) {
        let (s, t) = (
            q_prime.vertex_index(q.source_name(a)),
            q_prime.vertex_index(q.target_name(a)),
        );
        let (s, t) = (s.expect("checked"), t.expect("checked"));
        let mut f = ExactMatrix::zeros(field, n, n);
        f.set_block(l.offsets[t], l.offsets[s], phi);
        let mut image = FreeMat::identity(field, &alphabet, n);
        for step in &embedding[&a.name] {
            image = canonical.arrow_image(step).expect("checked").mul(&image)?;
        }
        let diff = image.sub(&FreeMat::from_scalar(&alphabet, &f))?;
        for (i, j, p) in diff.nonzero_entries() {
            gens.push(p.clone());
            sources.push(format!("{}[{},{}]", a.name, i + 1, j + 1));
        }
    }
    let ideal = IdealGens::new(field, &alphabet, gens)?;
    Ok(Presentation {
        canonical,
        ideal,
        sources,
    })
}

fn check_path(
    q: &Quiver,
    arrow: &str,
    source: &str,
    target: &str,
    path: &[String],
) -> Result<(), EpiError> {
    let bad = |message: String| {
        Err(EpiError::PathMismatch {
            arrow: arrow.to_string(),
            message,
        })
    };
    if path.is_empty() {
        return bad("empty path".into());
    }
    let mut at = source;
    for step in path {
        let Some(b) = q.arrow(step) else {
            return bad(format!("`{step}` is not an arrow of the target quiver"));
        };
        if q.source_name(b) != at {
            return bad(format!(
                "`{step}` starts at `{}`, expected `{at}`",
                q.source_name(b)
            ));
        }
        at = q.target_name(b);
    }
    if at != target {
        return bad(format!("path ends at `{at}`, expected `{target}`"));
    }
    Ok(())
}

/// Result of solving away linear generators `c·x + d`.
#[derive(Debug, Clone)]
pub struct Elimination<K: Field> {
    /// The homomorphism over the surviving letters.
    pub hom: AlgebraHom<K>,
    /// `(x, value)` for each eliminated letter, in elimination order.
    pub assignments: Vec<(String, K::Elem)>,
    /// Generators that are not of that form, over the surviving letters.
    pub remaining: Vec<FreePoly<K>>,
}

/// `Some((x, −d/c))` when `p = c·x + d` for a single letter `x`.
fn single_letter_linear<K: Field>(p: &FreePoly<K>) -> Option<(u32, K::Elem)> {
    let field = p.field();
    let mut letter = None;
    let mut constant = field.zero();
    for (w, c) in p.terms() {
        match w.degree() {
            0 => constant = c.clone(),
            1 if letter.is_none() => letter = Some((w.0[0], c.clone())),
            _ => return None,
        }
    }
    let (x, c) = letter?;
    let value = field.neg(&field.div(&constant, &c).ok()?);
    Some((x, value))
}

/// Repeatedly solves a generator of the form `c·x + d` for `x` and
/// substitutes, until no such generator is left.
pub fn eliminate_linear_generators<K: Field>(
    h: &AlgebraHom<K>,
    ideal: &IdealGens<K>,
) -> Result<Elimination<K>, EpiError> {
    let field = h.field();
    let alphabet = h.alphabet().clone();
    if **ideal.alphabet() != *alphabet {
        return Err(EpiError::Structure(
            "ideal and homomorphism use different alphabets".into(),
        ));
    }
    let mut images: Vec<FreePoly<K>> = (0..alphabet.len() as u32)
        .map(|i| FreePoly::monomial(field, &alphabet, Word(vec![i]), field.one()))
        .collect();
    let mut gens: Vec<FreePoly<K>> = ideal.generators().to_vec();
    let mut assignments = Vec::new();
    let mut eliminated = vec![false; alphabet.len()];
    while let Some((x, value)) = gens.iter().find_map(single_letter_linear) {
        let mut step: Vec<FreePoly<K>> = (0..alphabet.len() as u32)
            .map(|i| FreePoly::monomial(field, &alphabet, Word(vec![i]), field.one()))
            .collect();
        step[x as usize] = FreePoly::constant(field, &alphabet, value.clone());
        gens = gens
            .iter()
            .map(|g| g.substitute(&alphabet, &step))
            .filter(|g| !g.as_ref().is_ok_and(FreePoly::is_zero))
            .collect::<Result<_, _>>()?;
        images = images
            .iter()
            .map(|p| p.substitute(&alphabet, &step))
            .collect::<Result<_, _>>()?;
        eliminated[x as usize] = true;
        assignments.push((alphabet.name(x).to_string(), value));
    }

    let kept: Vec<String> = alphabet
        .letters()
        .iter()
        .zip(&eliminated)
        .filter(|(_, &e)| !e)
        .map(|(l, _)| l.clone())
        .collect();
    let reduced = Alphabet::new(&kept)?;
    let images: Vec<FreePoly<K>> = images
        .iter()
        .map(|p| p.embed(&reduced))
        .collect::<Result<_, _>>()?;
    let map = |m: &FreeMat<K>| m.substitute(&reduced, &images);
    let hom = AlgebraHom::new(
        field,
        h.quiver().clone(),
        reduced.clone(),
        h.size(),
        h.idempotents().iter().map(map).collect::<Result<_, _>>()?,
        h.arrow_images().iter().map(map).collect::<Result<_, _>>()?,
    )?;
    let sites = h
        .letter_sites()
        .iter()
        .filter(|s| reduced.contains(&s.letter))
        .cloned()
        .collect();
    let mut hom = hom.with_sites(sites)?;
    for note in h.notes() {
        hom = hom.with_note(note.clone());
    }
    let remaining = gens
        .iter()
        .map(|g| g.embed(&reduced))
        .collect::<Result<_, _>>()?;
    Ok(Elimination {
        hom,
        assignments,
        remaining,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectorDirection {
    /// From a vertex of the first quiver to a vertex of the second.
    OneToTwo,
    TwoToOne,
}

/// A connecting arrow `source → target` between the two glued quivers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    pub source: String,
    pub target: String,
    pub direction: ConnectorDirection,
}

/// The two-vertex quiver of a glued algebra: `n1` loops at `v1`, `n2` at
/// `v2`, and for each connector `s → t` a bundle of `α(s)·β(t)` arrows
/// between `v1` and `v2` in the connector's direction.
pub fn glued_quiver(
    n1: usize,
    n2: usize,
    alpha1: &DimVector,
    alpha2: &DimVector,
    connectors: &[Connector],
) -> Result<Quiver, EpiError> {
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    for i in 1..=n1 {
        arrows.push((format!("l1_{i}"), "v1".into(), "v1".into()));
    }
    for i in 1..=n2 {
        arrows.push((format!("l2_{i}"), "v2".into(), "v2".into()));
    }
    for (k, c) in connectors.iter().enumerate() {
        let (from, to, src, tgt) = match c.direction {
            ConnectorDirection::OneToTwo => (alpha1, alpha2, "v1", "v2"),
            ConnectorDirection::TwoToOne => (alpha2, alpha1, "v2", "v1"),
        };
        let a = from
            .get(&c.source)
            .ok_or_else(|| EpiError::EndpointMismatch(c.source.clone()))?;
        let b = to
            .get(&c.target)
            .ok_or_else(|| EpiError::EndpointMismatch(c.target.clone()))?;
        for i in 1..=a * b {
            arrows.push((format!("c{}_{i}", k + 1), src.into(), tgt.into()));
        }
    }
    Ok(Quiver::with_cycles(
        &["v1".to_string(), "v2".to_string()],
        &arrows,
    )?)
}
