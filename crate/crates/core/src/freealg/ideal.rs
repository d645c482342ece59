//! Bounded-degree two-sided ideal membership.
//!
//! The span of all products `u · g · w` with `deg u + deg g + deg w ≤ D` is
//! kept in echelon form keyed by leading monomial. Each echelon row remembers
//! the product it came from and the rows subtracted while reducing it, so a
//! successful reduction of a target can be unwound into an explicit
//! combination of products.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{same_alphabet, Alphabet, FreeAlgError, FreePoly, Word};
use crate::exactlin::Field;

/// Generators of a two-sided ideal. Zero generators are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealGens<K: Field> {
    field: K,
    alphabet: Arc<Alphabet>,
    gens: Vec<FreePoly<K>>,
}

impl<K: Field> IdealGens<K> {
    pub fn new(
        field: K,
        alphabet: &Arc<Alphabet>,
        gens: Vec<FreePoly<K>>,
    ) -> Result<Self, FreeAlgError> {
        for g in &gens {
            same_alphabet(alphabet, g.alphabet())?;
        }
        Ok(IdealGens {
            field,
            alphabet: alphabet.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn generators(&self) -> &[FreePoly<K>] {
        &self.gens
    }

    pub fn max_degree(&self) -> usize {
        self.gens
            .iter()
            .filter_map(FreePoly::degree)
            .max()
            .unwrap_or(0)
    }
}

/// One summand `coef · left · g_generator · right` of a membership certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertTerm<K: Field> {
    pub coef: K::Elem,
    pub left: Word,
    pub generator: usize,
    pub right: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipResult<K: Field> {
    /// Found in the span of products of degree at most `degree`.
    Member {
        degree: usize,
        certificate: Vec<CertTerm<K>>,
    },
    /// Not in the span up to this degree; says nothing about higher degrees.
    NotFoundUpTo(usize),
}

impl<K: Field> MembershipResult<K> {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipResult::Member { .. })
    }
}

/// Re-evaluates a certificate as a polynomial.
pub fn certificate_value<K: Field>(gens: &IdealGens<K>, cert: &[CertTerm<K>]) -> FreePoly<K> {
    let mut out = FreePoly::zero(gens.field, &gens.alphabet);
    for t in cert {
        out.add_scaled_sandwich(&t.coef, &t.left, &gens.gens[t.generator], &t.right);
    }
    out
}

struct Product {
    generator: usize,
    left: Word,
    right: Word,
}

/// `product = lc · row + Σ c_j · row_j`, with `row` monic.
struct Row<K: Field> {
    poly: BTreeMap<Word, K::Elem>,
    product: usize,
    lc: K::Elem,
    steps: Vec<(usize, K::Elem)>,
}

/// An incrementally grown echelon basis of a bounded-degree ideal slice,
/// shared across many membership queries against the same generators.
pub struct IdealSpan<K: Field> {
    gens: IdealGens<K>,
    degree: Option<usize>,
    products: Vec<Product>,
    rows: Vec<Row<K>>,
    pivots: BTreeMap<Word, usize>,
}

impl<K: Field> IdealSpan<K> {
    pub fn new(gens: IdealGens<K>) -> Self {
        IdealSpan {
            gens,
            degree: None,
            products: Vec::new(),
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn generators(&self) -> &IdealGens<K> {
        &self.gens
    }

    /// Dimension of the span built so far.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of products enumerated so far.
    pub fn products_seen(&self) -> usize {
        self.products.len()
    }

    /// Adds every product of total degree at most `bound`.
    pub fn extend_to(&mut self, bound: usize) {
        let start = self.degree.map_or(0, |d| d + 1);
        let letters = self.gens.alphabet.len();
        for d in start..=bound {
            for gi in 0..self.gens.gens.len() {
                let Some(gdeg) = self.gens.gens[gi].degree() else {
                    continue;
                };
                if gdeg > d {
                    continue;
                }
                let extra = d - gdeg;
                for left_len in 0..=extra {
                    let lefts = Word::all_of_length(letters, left_len);
                    let rights = Word::all_of_length(letters, extra - left_len);
                    for u in &lefts {
                        for w in &rights {
                            self.insert(gi, u.clone(), w.clone());
                        }
                    }
                }
            }
            self.degree = Some(d);
            log::debug!(
                "ideal span degree {d}: {} products, rank {}",
                self.products.len(),
                self.rows.len()
            );
        }
    }

    fn insert(&mut self, generator: usize, left: Word, right: Word) {
        let f = self.gens.field;
        let mut poly = FreePoly::zero(f, &self.gens.alphabet);
        poly.add_scaled_sandwich(&f.one(), &left, &self.gens.gens[generator], &right);
        let mut poly = poly.terms().clone();
        let product = self.products.len();
        self.products.push(Product {
            generator,
            left,
            right,
        });
        let steps = self.reduce_leading(&mut poly);
        let Some((lead, lc)) = poly.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
            return;
        };
        let inv = f.inv(&lc).expect("nonzero leading coefficient");
        for c in poly.values_mut() {
            *c = f.mul(c, &inv);
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(Row {
            poly,
            product,
            lc,
            steps,
        });
    }

    /// Cancels leading terms against pivots until the leading monomial is new
    /// (or the polynomial vanishes). Returns the multiples subtracted.
    fn reduce_leading(&self, poly: &mut BTreeMap<Word, K::Elem>) -> Vec<(usize, K::Elem)> {
        let f = self.gens.field;
        let mut steps = Vec::new();
        while let Some((lead, c)) = poly.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) {
            let Some(&r) = self.pivots.get(&lead) else {
                break;
            };
            for (w, a) in &self.rows[r].poly {
                let delta = f.mul(&c, a);
                let entry = poly.entry(w.clone()).or_insert_with(|| f.zero());
                *entry = f.sub(entry, &delta);
                if f.is_zero(entry) {
                    poly.remove(w);
                }
            }
            steps.push((r, c));
        }
        steps
    }

    /// A certificate for `target` within the current span, if it lies there.
    pub fn certificate(
        &self,
        target: &FreePoly<K>,
    ) -> Result<Option<Vec<CertTerm<K>>>, FreeAlgError> {
        same_alphabet(&self.gens.alphabet, target.alphabet())?;
        let f = self.gens.field;
        let mut poly = target.terms().clone();
        let steps = self.reduce_leading(&mut poly);
        if !poly.is_empty() {
            return Ok(None);
        }
        // target = Σ a_r row_r; unwind rows newest first.
        let mut coef: BTreeMap<usize, K::Elem> = BTreeMap::new();
        for (r, c) in steps {
            let e = coef.entry(r).or_insert_with(|| f.zero());
            *e = f.add(e, &c);
        }
        let mut on_products: BTreeMap<usize, K::Elem> = BTreeMap::new();
        while let Some((r, a)) = coef.pop_last() {
            if f.is_zero(&a) {
                continue;
            }
            let row = &self.rows[r];
            let scaled = f.div(&a, &row.lc).expect("nonzero leading coefficient");
            let e = on_products.entry(row.product).or_insert_with(|| f.zero());
            *e = f.add(e, &scaled);
            for (j, c) in &row.steps {
                let e = coef.entry(*j).or_insert_with(|| f.zero());
                *e = f.sub(e, &f.mul(&scaled, c));
            }
        }
        Ok(Some(
            on_products
                .into_iter()
                .filter(|(_, c)| !f.is_zero(c))
                .map(|(p, coef)| {
                    let prod = &self.products[p];
                    CertTerm {
                        coef,
                        left: prod.left.clone(),
                        generator: prod.generator,
                        right: prod.right.clone(),
                    }
                })
                .collect(),
        ))
    }

    /// The first span degree `D ≤ bound`, at or above the degree already
    /// built, whose span contains `target`, with a certificate.
    pub fn membership(
        &mut self,
        target: &FreePoly<K>,
        bound: usize,
    ) -> Result<MembershipResult<K>, FreeAlgError> {
        same_alphabet(&self.gens.alphabet, target.alphabet())?;
        let degree = target.degree().unwrap_or(0);
        if degree > bound {
            return Err(FreeAlgError::DegreeBoundTooSmall { degree, bound });
        }
        if target.is_zero() {
            return Ok(MembershipResult::Member {
                degree: 0,
                certificate: Vec::new(),
            });
        }
        if self.degree.is_some_and(|d| d > bound) {
            return IdealSpan::new(self.gens.clone()).membership(target, bound);
        }
        // Earlier queries may have grown the span already; the reported degree
        // is the span degree at which the certificate was found.
        for d in self.degree.unwrap_or(0)..=bound {
            self.extend_to(d);
            if let Some(certificate) = self.certificate(target)? {
                return Ok(MembershipResult::Member {
                    degree: d,
                    certificate,
                });
            }
        }
        Ok(MembershipResult::NotFoundUpTo(bound))
    }
}

/// Whether `target` is a combination of products `u · g · w` of total degree
/// at most `degree_bound`.
pub fn ideal_membership<K: Field>(
    gens: &IdealGens<K>,
    target: &FreePoly<K>,
    degree_bound: usize,
) -> Result<MembershipResult<K>, FreeAlgError> {
    IdealSpan::new(gens.clone()).membership(target, degree_bound)
}
