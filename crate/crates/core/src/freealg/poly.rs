use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{same_alphabet, Alphabet, FreeAlgError, Word};
use crate::exactlin::{format_signed, ExactMatrix, Field};

/// A noncommutative polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct FreePoly<K: Field> {
    field: K,
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Word, K::Elem>,
}

impl<K: Field> FreePoly<K> {
    pub fn zero(field: K, alphabet: &Arc<Alphabet>) -> Self {
        FreePoly {
            field,
            alphabet: alphabet.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: K, alphabet: &Arc<Alphabet>, c: K::Elem) -> Self {
        Self::monomial(field, alphabet, Word::unit(), c)
    }

    pub fn one(field: K, alphabet: &Arc<Alphabet>) -> Self {
        Self::constant(field, alphabet, field.one())
    }

    pub fn monomial(field: K, alphabet: &Arc<Alphabet>, word: Word, c: K::Elem) -> Self {
        let mut p = Self::zero(field, alphabet);
        if !field.is_zero(&c) {
            p.terms.insert(word, c);
        }
        p
    }

    pub fn letter(field: K, alphabet: &Arc<Alphabet>, name: &str) -> Result<Self, FreeAlgError> {
        let i = alphabet
            .index_of(name)
            .ok_or_else(|| FreeAlgError::UnknownLetter(name.to_string()))?;
        Ok(Self::monomial(field, alphabet, Word(vec![i]), field.one()))
    }

    pub fn from_terms(
        field: K,
        alphabet: &Arc<Alphabet>,
        terms: impl IntoIterator<Item = (Word, K::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, alphabet);
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> &BTreeMap<Word, K::Elem> {
        &self.terms
    }

    pub fn coefficient(&self, w: &Word) -> K::Elem {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant term's value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<K::Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => self.terms.get(&Word::unit()).cloned(),
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::degree)
    }

    pub fn leading(&self) -> Option<(&Word, &K::Elem)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, w: Word, c: &K::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c · left · other · right`.
    pub(crate) fn add_scaled_sandwich(
        &mut self,
        c: &K::Elem,
        left: &Word,
        other: &Self,
        right: &Word,
    ) {
        for (w, a) in &other.terms {
            let coef = self.field.mul(c, a);
            self.add_term(w.sandwich(left, right), &coef);
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        same_alphabet(&self.alphabet, &rhs.alphabet)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, &self.alphabet);
        if f.is_zero(c) {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(w, a)| (w.clone(), f.mul(a, c)))
            .collect();
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        same_alphabet(&self.alphabet, &rhs.alphabet)?;
        let mut out = Self::zero(self.field, &self.alphabet);
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), &self.field.mul(a, b));
            }
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a larger alphabet, matching letters by name.
    pub fn embed(&self, target: &Arc<Alphabet>) -> Result<Self, FreeAlgError> {
        self.rename(target, |name| Some(name.to_string()))
    }

    /// Sends each letter to `rename(letter)` in `target`.
    pub fn rename(
        &self,
        target: &Arc<Alphabet>,
        rename: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, FreeAlgError> {
        let map: Vec<Option<u32>> = self
            .alphabet
            .letters()
            .iter()
            .map(|l| rename(l).and_then(|n| target.index_of(&n)))
            .collect();
        let mut out = Self::zero(self.field, target);
        for (w, c) in &self.terms {
            let letters =
                w.0.iter()
                    .map(|&i| {
                        map[i as usize].ok_or_else(|| {
                            FreeAlgError::UnknownLetter(self.alphabet.name(i).to_string())
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            out.add_term(Word(letters), c);
        }
        Ok(out)
    }

    /// Replaces letter `i` by `images[i]`, a polynomial over `target`.
    pub fn substitute(
        &self,
        target: &Arc<Alphabet>,
        images: &[FreePoly<K>],
    ) -> Result<FreePoly<K>, FreeAlgError> {
        if images.len() != self.alphabet.len() {
            return Err(FreeAlgError::WrongArity {
                expected: self.alphabet.len(),
                found: images.len(),
            });
        }
        let mut out = FreePoly::zero(self.field, target);
        for (w, c) in &self.terms {
            let mut term = FreePoly::constant(self.field, target, c.clone());
            for &i in &w.0 {
                term = term.mul(&images[i as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluates at square matrices of size `size`, one per letter.
    pub fn evaluate(
        &self,
        values: &[ExactMatrix<K>],
        size: usize,
    ) -> Result<ExactMatrix<K>, FreeAlgError> {
        if values.len() != self.alphabet.len() {
            return Err(FreeAlgError::WrongArity {
                expected: self.alphabet.len(),
                found: values.len(),
            });
        }
        let f = self.field;
        let mut out = ExactMatrix::zeros(f, size, size);
        for (w, c) in &self.terms {
            let mut m = ExactMatrix::identity(f, size).scale(c);
            for &i in &w.0 {
                m = m.mul(&values[i as usize])?;
            }
            out = out.add(&m)?;
        }
        Ok(out)
    }

    /// Converts coefficients into another field; `None` if some coefficient has no image.
    pub fn map_field<L: Field>(
        &self,
        target: L,
        convert: impl Fn(&K::Elem) -> Option<L::Elem>,
    ) -> Option<FreePoly<L>> {
        let mut out = FreePoly::zero(target, &self.alphabet);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &convert(c)?);
        }
        Some(out)
    }

    /// Parses `3/2*x.y.v12 + v11 - v22`; `.` is concatenation.
    pub fn parse(field: K, alphabet: &Arc<Alphabet>, text: &str) -> Result<Self, FreeAlgError> {
        let err = |column: usize, message: String| FreeAlgError::Parse { column, message };
        let mut out = Self::zero(field, alphabet);
        // Split into signed terms at `+`/`-`; a sign right after `*` or `/`
        // belongs to the coefficient, and consecutive signs combine.
        let mut pieces: Vec<(usize, bool, &str)> = Vec::new();
        let (mut start, mut negative, mut has_body) = (0, false, false);
        let mut last = ' ';
        for (i, ch) in text.char_indices() {
            if (ch == '+' || ch == '-') && last != '*' && last != '/' {
                if has_body {
                    pieces.push((start, negative, &text[start..i]));
                    negative = false;
                    has_body = false;
                }
                negative ^= ch == '-';
                start = i + 1;
            } else if !ch.is_whitespace() {
                has_body = true;
            }
            if !ch.is_whitespace() {
                last = ch;
            }
        }
        if !has_body {
            return Err(err(text.len() + 1, "expected a term".into()));
        }
        pieces.push((start, negative, &text[start..]));
        for (col, neg, raw) in pieces {
            let body = raw.trim();
            let (coef_text, word_text) = match body.split_once('*') {
                Some((c, w)) => (Some(c.trim()), Some(w.trim())),
                None if body.starts_with(|c: char| c.is_ascii_digit()) => (Some(body), None),
                None => (None, Some(body)),
            };
            let mut coef = match coef_text {
                Some(c) => field.parse(c).map_err(|e| err(col + 1, e.to_string()))?,
                None => field.one(),
            };
            if neg {
                coef = field.neg(&coef);
            }
            let word = match word_text {
                None | Some("1") => Word::unit(),
                Some(w) => Word(
                    w.split('.')
                        .map(|l| {
                            let l = l.trim();
                            alphabet
                                .index_of(l)
                                .ok_or_else(|| FreeAlgError::UnknownLetter(l.to_string()))
                        })
                        .collect::<Result<_, _>>()?,
                ),
            };
            out.add_term(word, &coef);
        }
        Ok(out)
    }

    /// Terms from the leading monomial down, e.g. `x.y - 3/2*v_1_2 + 1`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = format_signed(&self.field, c);
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if w.0.is_empty() {
                s.push_str(&mag);
            } else {
                if mag != "1" {
                    s.push_str(&mag);
                    s.push('*');
                }
                s.push_str(&w.render(&self.alphabet));
            }
        }
        s
    }
}

impl<K: Field> fmt::Debug for FreePoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl<K: Field> fmt::Display for FreePoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
