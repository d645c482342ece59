//! The free associative algebra `k⟨x_1, …, x_n⟩`, matrices over it, and
//! bounded-degree membership in two-sided ideals.
//!
//! A free product of free algebras is the free algebra on the disjoint union
//! of their alphabets, so [`Alphabet::extended`] is all the free-product
//! arithmetic needed here.

mod ideal;
mod mat;
mod poly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::exactlin::{FieldError, LinalgError};

pub use ideal::{
    certificate_value, ideal_membership, CertTerm, IdealGens, IdealSpan, MembershipResult,
};
pub use mat::FreeMat;
pub use poly::FreePoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeAlgError {
    #[error("operands use different alphabets")]
    AlphabetMismatch,
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("unknown indeterminate `{0}`")]
    UnknownLetter(String),
    #[error("invalid indeterminate name `{0}`")]
    BadLetter(String),
    #[error("indeterminate `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("target has degree {degree}, above the bound {bound}")]
    DegreeBoundTooSmall { degree: usize, bound: usize },
    #[error("expected {expected} substitution values, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Indeterminate names start with a letter or `_`, then `[A-Za-z0-9_']*`.
pub fn is_letter_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// An ordered, duplicate-free list of indeterminate names.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, u32>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(letters: &[S]) -> Result<Arc<Self>, FreeAlgError> {
        Self::empty().extended(letters)
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Alphabet {
            letters: Vec::new(),
            index: HashMap::new(),
        })
    }

    /// This alphabet followed by `more`, which must be fresh.
    pub fn extended<S: AsRef<str>>(&self, more: &[S]) -> Result<Arc<Self>, FreeAlgError> {
        let mut out = self.clone();
        for l in more {
            let l = l.as_ref();
            if !is_letter_name(l) {
                return Err(FreeAlgError::BadLetter(l.to_string()));
            }
            if out
                .index
                .insert(l.to_string(), out.letters.len() as u32)
                .is_some()
            {
                return Err(FreeAlgError::DuplicateLetter(l.to_string()));
            }
            out.letters.push(l.to_string());
        }
        Ok(Arc::new(out))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn name(&self, i: u32) -> &str {
        &self.letters[i as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// `base`, or `base` with a numeric suffix, not yet in the alphabet.
    pub fn fresh_prefix(&self, base: &str) -> String {
        let clash = |p: &str| self.letters.iter().any(|l| l.starts_with(p));
        if !clash(base) {
            return base.to_string();
        }
        (2..)
            .map(|i| format!("{base}{i}"))
            .find(|p| !clash(p))
            .expect("unbounded search")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.letters).finish()
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> Result<(), FreeAlgError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(FreeAlgError::AlphabetMismatch)
    }
}

/// A monomial: letter indices, ordered by degree and then lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `left · self · right`.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Word {
        let mut v = Vec::with_capacity(left.0.len() + self.0.len() + right.0.len());
        v.extend_from_slice(&left.0);
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&right.0);
        Word(v)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&i| alphabet.name(i))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// All words of length `len` over `n` letters, in increasing order.
    pub fn all_of_length(n: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::unit()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| {
                    (0..n as u32).map(move |l| {
                        let mut v = w.0.clone();
                        v.push(l);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
