use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::EpiError;
use crate::exactlin::{Field, FieldKind};
use crate::freealg::{Alphabet, FreeMat};
use crate::quiver::Quiver;

/// Version tag written into homomorphism files.
pub const HOM_SCHEMA: u32 = 1;

/// Where a letter sits: entry `(row, col)` (0-based, global) of an arrow image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterSite {
    pub letter: String,
    pub arrow: String,
    pub row: usize,
    pub col: usize,
}

/// A homomorphism `kQ → M_n(k⟨X⟩)` given on vertex idempotents and arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraHom<K: Field> {
    field: K,
    quiver: Quiver,
    alphabet: Arc<Alphabet>,
    size: usize,
    idempotents: Vec<FreeMat<K>>,
    arrows: Vec<FreeMat<K>>,
    sites: Vec<LetterSite>,
    notes: Vec<String>,
}

impl<K: Field> AlgebraHom<K> {
    /// Builds and structurally checks a homomorphism. Images follow the
    /// quiver's vertex and arrow order.
    pub fn new(
        field: K,
        quiver: Quiver,
        alphabet: Arc<Alphabet>,
        size: usize,
        idempotents: Vec<FreeMat<K>>,
        arrows: Vec<FreeMat<K>>,
    ) -> Result<Self, EpiError> {
        let h = AlgebraHom {
            field,
            quiver,
            alphabet,
            size,
            idempotents,
            arrows,
            sites: Vec::new(),
            notes: Vec::new(),
        };
        h.check_structure()?;
        Ok(h)
    }

    pub(crate) fn with_sites(mut self, sites: Vec<LetterSite>) -> Result<Self, EpiError> {
        self.sites = sites;
        self.check_sites()?;
        Ok(self)
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn idempotents(&self) -> &[FreeMat<K>] {
        &self.idempotents
    }

    pub fn arrow_images(&self) -> &[FreeMat<K>] {
        &self.arrows
    }

    pub fn idempotent(&self, vertex: &str) -> Option<&FreeMat<K>> {
        self.quiver
            .vertex_index(vertex)
            .map(|v| &self.idempotents[v])
    }

    pub fn arrow_image(&self, arrow: &str) -> Option<&FreeMat<K>> {
        self.quiver.arrow_index(arrow).map(|a| &self.arrows[a])
    }

    /// Images of all algebra generators: idempotents, then arrows.
    pub fn generator_images(&self) -> impl Iterator<Item = &FreeMat<K>> {
        self.idempotents.iter().chain(&self.arrows)
    }

    pub fn letter_sites(&self) -> &[LetterSite] {
        &self.sites
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Same images with every letter `x` renamed to `rename(x)`.
    pub fn rename_letters(&self, rename: impl Fn(&str) -> String) -> Result<Self, EpiError> {
        let names: Vec<String> = self.alphabet.letters().iter().map(|l| rename(l)).collect();
        let target = Alphabet::new(&names)?;
        let map = |m: &FreeMat<K>| m.try_map(&target, |p| p.rename(&target, |l| Some(rename(l))));
        let sites = self
            .sites
            .iter()
            .map(|s| LetterSite {
                letter: rename(&s.letter),
                ..s.clone()
            })
            .collect();
        Ok(AlgebraHom {
            field: self.field,
            quiver: self.quiver.clone(),
            alphabet: target.clone(),
            size: self.size,
            idempotents: self.idempotents.iter().map(map).collect::<Result<_, _>>()?,
            arrows: self.arrows.iter().map(map).collect::<Result<_, _>>()?,
            sites,
            notes: self.notes.clone(),
        })
    }

    /// The same homomorphism with coefficients converted into `target`;
    /// `None` when some coefficient has no image there.
    pub fn map_field<L: Field>(
        &self,
        target: L,
        convert: impl Fn(&K::Elem) -> Option<L::Elem>,
    ) -> Option<AlgebraHom<L>> {
        let map = |ms: &[FreeMat<K>]| {
            ms.iter()
                .map(|m| m.map_field(target, &convert))
                .collect::<Option<Vec<_>>>()
        };
        Some(AlgebraHom {
            field: target,
            quiver: self.quiver.clone(),
            alphabet: self.alphabet.clone(),
            size: self.size,
            idempotents: map(&self.idempotents)?,
            arrows: map(&self.arrows)?,
            sites: self.sites.clone(),
            notes: self.notes.clone(),
        })
    }

    /// Idempotents are orthogonal and sum to `I`; `h(e) = h(e_t) h(e) h(e_s)`.
    pub fn check_structure(&self) -> Result<(), EpiError> {
        let bad = |m: String| Err(EpiError::Structure(m));
        let n = self.size;
        if !self.quiver.is_acyclic() {
            return bad("source quiver has a cycle".into());
        }
        if self.idempotents.len() != self.quiver.vertex_count()
            || self.arrows.len() != self.quiver.arrows().len()
        {
            return bad("image count does not match the quiver".into());
        }
        for m in self.generator_images() {
            if m.shape() != (n, n) {
                return bad(format!("image of shape {:?}, expected {n}x{n}", m.shape()));
            }
            if **m.alphabet() != *self.alphabet {
                return bad("image over a different alphabet".into());
            }
        }
        let mut sum = FreeMat::zeros(self.field, &self.alphabet, n, n);
        for (i, a) in self.idempotents.iter().enumerate() {
            sum = sum.add(a)?;
            for (j, b) in self.idempotents.iter().enumerate() {
                let prod = a.mul(b)?;
                let ok = if i == j { prod == *a } else { prod.is_zero() };
                if !ok {
                    let v = &self.quiver.vertices();
                    return bad(format!(
                        "idempotent images of `{}` and `{}` violate e_i e_j = δ_ij e_i",
                        v[i], v[j]
                    ));
                }
            }
        }
        if n > 0 && sum != FreeMat::identity(self.field, &self.alphabet, n) {
            return bad("idempotent images do not sum to the identity".into());
        }
        for (a, img) in self.quiver.arrows().iter().zip(&self.arrows) {
            let sandwich = self.idempotents[a.target]
                .mul(img)?
                .mul(&self.idempotents[a.source])?;
            if sandwich != *img {
                return bad(format!(
                    "image of `{}` is not supported in block (t, s)",
                    a.name
                ));
            }
        }
        self.check_sites()
    }

    fn check_sites(&self) -> Result<(), EpiError> {
        for s in &self.sites {
            if !self.alphabet.contains(&s.letter)
                || self.quiver.arrow_index(&s.arrow).is_none()
                || s.row >= self.size
                || s.col >= self.size
            {
                return Err(EpiError::Structure(format!(
                    "bad letter site for `{}`",
                    s.letter
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let named = |names: Vec<String>, mats: &[FreeMat<K>]| {
            names
                .into_iter()
                .zip(mats)
                .map(|(name, m)| NamedMatrix {
                    name,
                    rows: m.to_rows_text(),
                })
                .collect()
        };
        let file = HomFile {
            schema: HOM_SCHEMA,
            field: self.field.kind(),
            quiver: self.quiver.clone(),
            alphabet: self.alphabet.letters().to_vec(),
            size: self.size,
            idempotents: named(self.quiver.vertices().to_vec(), &self.idempotents),
            arrows: named(
                self.quiver
                    .arrows()
                    .iter()
                    .map(|a| a.name.clone())
                    .collect(),
                &self.arrows,
            ),
            letter_sites: self.sites.clone(),
            notes: self.notes.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(field: K, text: &str) -> Result<Self, EpiError> {
        let file: HomFile =
            serde_json::from_str(text).map_err(|e| EpiError::Json(e.to_string()))?;
        if file.schema != HOM_SCHEMA {
            return Err(EpiError::Json(format!(
                "unsupported schema {}",
                file.schema
            )));
        }
        if file.field != field.kind() {
            return Err(EpiError::Json(format!(
                "file is over {}, expected {}",
                file.field,
                field.kind()
            )));
        }
        let alphabet = Alphabet::new(&file.alphabet)?;
        let n = file.size;
        let read = |named: &[NamedMatrix], expected: Vec<&str>| {
            if named.len() != expected.len()
                || named.iter().zip(&expected).any(|(m, e)| m.name != *e)
            {
                return Err(EpiError::Json(format!(
                    "images must be listed in order {expected:?}"
                )));
            }
            named
                .iter()
                .map(|m| {
                    if m.rows.len() != n {
                        return Err(EpiError::Json(format!(
                            "image of `{}` has {} rows, expected {n}",
                            m.name,
                            m.rows.len()
                        )));
                    }
                    Ok(FreeMat::parse_rows(field, &alphabet, n, &m.rows)?)
                })
                .collect::<Result<Vec<_>, EpiError>>()
        };
        let idempotents = read(
            &file.idempotents,
            file.quiver.vertices().iter().map(String::as_str).collect(),
        )?;
        let arrows = read(
            &file.arrows,
            file.quiver
                .arrows()
                .iter()
                .map(|a| a.name.as_str())
                .collect(),
        )?;
        let mut h = AlgebraHom::new(field, file.quiver, alphabet, n, idempotents, arrows)?
            .with_sites(file.letter_sites)?;
        h.notes = file.notes;
        Ok(h)
    }
}

/// Reads only the field tag of a homomorphism file.
pub fn field_of_hom_json(text: &str) -> Result<FieldKind, EpiError> {
    #[derive(Deserialize)]
    struct Head {
        field: FieldKind,
    }
    let head: Head = serde_json::from_str(text).map_err(|e| EpiError::Json(e.to_string()))?;
    Ok(head.field)
}

#[derive(Serialize, Deserialize)]
struct NamedMatrix {
    name: String,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct HomFile {
    schema: u32,
    field: FieldKind,
    quiver: Quiver,
    alphabet: Vec<String>,
    size: usize,
    idempotents: Vec<NamedMatrix>,
    arrows: Vec<NamedMatrix>,
    #[serde(default)]
    letter_sites: Vec<LetterSite>,
    #[serde(default)]
    notes: Vec<String>,
}
