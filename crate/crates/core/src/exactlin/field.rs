//! Exact base fields: the rationals and prime fields `F_p`.
//!
//! A [`Field`] value is a small descriptor (zero-sized for ℚ, the modulus for
//! `F_p`) that performs the arithmetic on its element type. Containers such
//! as [`ExactMatrix`](super::ExactMatrix) carry their descriptor so that
//! constants like zero and one are always available.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator of {value} vanishes modulo {p}")]
    NotRepresentable { value: String, p: u64 },
    #[error("unknown field `{0}` (expected `q` or `fp:<p>`)")]
    UnknownField(String),
}

#[allow(clippy::wrong_self_convention)]
pub trait Field: Copy + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// The element `num / den`; fails when `den` is zero in this field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, FieldError>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn format(&self, a: &Self::Elem) -> String;
    fn kind(&self) -> FieldKind;

    /// Image of `a` under reduction into `F_p`, when that reduction is defined.
    fn reduce_into(&self, a: &Self::Elem, target: PrimeField) -> Option<u64>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        let inv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// Parses `n`, `-n`, or `p/q` with integer `p`, `q`.
    fn parse(&self, text: &str) -> Result<Self::Elem, FieldError> {
        let (num, den) = parse_ratio(text)?;
        self.from_ratio(&num, &den)
    }
}

fn parse_ratio(text: &str) -> Result<(BigInt, BigInt), FieldError> {
    let text = text.trim();
    let err = || FieldError::Parse(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let num = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let den = BigInt::from_str(d.trim()).map_err(|_| err())?;
            Ok((num, den))
        }
        None => Ok((BigInt::from_str(text).map_err(|_| err())?, BigInt::one())),
    }
}

/// Serializable name of a field: `q` or `fp:<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "q"),
            FieldKind::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(FieldKind::Rational);
        }
        let p = s
            .strip_prefix("fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| FieldError::UnknownField(s.to_string()))?;
        PrimeField::new(p).map(|f| FieldKind::Prime(f.modulus()))
    }
}

impl From<FieldKind> for String {
    fn from(k: FieldKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for FieldKind {
    type Error = FieldError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// The field ℚ, elements in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }

    fn reduce_into(&self, a: &BigRational, target: PrimeField) -> Option<u64> {
        let p = BigInt::from(target.modulus());
        let num = a.numer().mod_floor(&p).to_u64()?;
        let den = a.denom().mod_floor(&p).to_u64()?;
        let den_inv = target.inv(&den)?;
        Some(target.mul(&num, &den_inv))
    }
}

/// The prime field `F_p` for a prime `p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64, FieldError> {
        let d = self.reduce_big(den);
        let d_inv = self.inv(&d).ok_or_else(|| {
            if den.is_zero() {
                FieldError::DivisionByZero
            } else {
                FieldError::NotRepresentable {
                    value: format!("{num}/{den}"),
                    p: self.p,
                }
            }
        })?;
        Ok(self.mul(&self.reduce_big(num), &d_inv))
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *a;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        Some(acc)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }

    fn reduce_into(&self, a: &u64, target: PrimeField) -> Option<u64> {
        (target.p == self.p).then_some(*a)
    }
}

/// Splits the rendered scalar into (is_negative, magnitude).
pub fn format_signed<K: Field>(field: &K, a: &K::Elem) -> (bool, String) {
    let s = field.format(a);
    match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s),
    }
}
