//! Finite sums `Σ cᵢ·√qᵢ` with `cᵢ, qᵢ ∈ Q(√2, √3)`, `qᵢ > 0`.
//!
//! Radicands are kept pairwise in distinct square classes of the field, so
//! a sum is zero exactly when it has no terms (square roots from distinct
//! classes are linearly independent over the field). Nonzero sums get their
//! sign from rational enclosures refined until they exclude zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::qfield::QField;
use super::rational::{ceil_sqrt_scaled, floor_sqrt_scaled, square_part};

pub const DEFAULT_MAX_PRECISION_BITS: u32 = 256;
const START_BITS: u32 = 24;

static MAX_PRECISION_BITS: AtomicU32 = AtomicU32::new(DEFAULT_MAX_PRECISION_BITS);

/// Caps the refinement depth used by every certified comparison.
pub fn set_max_precision_bits(bits: u32) {
    MAX_PRECISION_BITS.store(bits.max(START_BITS), AtomicOrdering::Relaxed);
}

pub fn max_precision_bits() -> u32 {
    MAX_PRECISION_BITS.load(AtomicOrdering::Relaxed)
}

/// A comparison that could not be separated within the precision cap.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("comparison undecided after {bits} bits of precision (value ≈ {approx:e})")]
pub struct Undecided {
    pub bits: u32,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: QField,
    pub radicand: QField,
}

/// Exact sum of square roots over Q(√2, √3).
#[derive(Clone, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct RadicalSum {
    terms: Vec<Term>,
}

/// Splits `q` as `f²·q'` with `q'` having coprime integral coefficients
/// stripped of small square factors.
fn normalize_radicand(q: &QField) -> (BigRational, QField) {
    let den = q.common_denominator();
    let integral = q.scale(&BigRational::from(&den * &den));
    let g = [&integral.a, &integral.b, &integral.c, &integral.d]
        .iter()
        .filter(|r| !r.is_zero())
        .fold(BigInt::zero(), |acc, r| acc.gcd(r.numer()));
    let s = square_part(&g, 1 << 12);
    let reduced = integral.scale(&BigRational::new(BigInt::one(), &s * &s));
    (BigRational::new(s, den), reduced)
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum::default()
    }

    pub fn from_field(x: QField) -> Self {
        let mut s = RadicalSum::zero();
        s.insert(x, QField::one());
        s
    }

    pub fn from_int(n: i64) -> Self {
        RadicalSum::from_field(QField::from_int(n))
    }

    /// `√q` for `q ≥ 0`.
    pub fn sqrt_of(q: &QField) -> Self {
        assert!(!q.is_negative(), "square root of negative field element {q}");
        let mut s = RadicalSum::zero();
        s.insert(QField::one(), q.clone());
        s
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, coeff: QField, radicand: QField) {
        if coeff.is_zero() || radicand.is_zero() {
            return;
        }
        let (coeff, radicand) = match radicand.sqrt_exact() {
            Some(root) => (coeff * root, QField::one()),
            None => {
                let (f, r) = normalize_radicand(&radicand);
                (coeff.scale(&f), r)
            }
        };
        for i in 0..self.terms.len() {
            let ratio = &radicand / &self.terms[i].radicand;
            if let Some(root) = ratio.sqrt_exact() {
                self.terms[i].coeff += &(coeff * root);
                if self.terms[i].coeff.is_zero() {
                    self.terms.remove(i);
                }
                return;
            }
        }
        let pos = self
            .terms
            .partition_point(|t| t.radicand < radicand);
        self.terms.insert(pos, Term { coeff, radicand });
    }

    /// The value as a field element when no irrational radical remains.
    pub fn as_field(&self) -> Option<QField> {
        match self.terms.as_slice() {
            [] => Some(QField::zero()),
            [t] if t.radicand == QField::one() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    /// `(c, q)` with value `c·√q` when the sum has a single term.
    pub fn as_single_radical(&self) -> Option<(QField, QField)> {
        match self.terms.as_slice() {
            [] => Some((QField::zero(), QField::one())),
            [t] => Some((t.coeff.clone(), t.radicand.clone())),
            _ => None,
        }
    }

    /// Square of the value, when it lies in the field.
    pub fn square_in_field(&self) -> Option<QField> {
        self.as_single_radical()
            .map(|(c, q)| c.square() * q)
    }

    pub fn scale(&self, k: &QField) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for t in &self.terms {
            out.insert(&t.coeff * k, t.radicand.clone());
        }
        out
    }

    /// Rational enclosure with `bits` fractional bits per irrational.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for t in &self.terms {
            let (cl, ch) = t.coeff.enclosure(bits);
            if t.radicand == QField::one() {
                lo += cl;
                hi += ch;
                continue;
            }
            let (ql, qh) = t.radicand.enclosure(bits);
            let (sl, sh) = (floor_sqrt_scaled(&ql, bits), ceil_sqrt_scaled(&qh, bits));
            let cands = [&cl * &sl, &cl * &sh, &ch * &sl, &ch * &sh];
            lo += cands.iter().min().unwrap().clone();
            hi += cands.iter().max().unwrap().clone();
        }
        (lo, hi)
    }

    /// Exact sign, certified by interval separation for nonzero values.
    pub fn sign(&self) -> Result<Ordering, Undecided> {
        self.sign_with_cap(max_precision_bits())
    }

    pub fn sign_with_cap(&self, max: u32) -> Result<Ordering, Undecided> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(x) = self.as_field() {
            return Ok(x.sign());
        }
        let mut bits = START_BITS.min(max);
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if bits >= max {
                return Err(Undecided {
                    bits,
                    approx: self.to_f64(),
                });
            }
            bits = (bits * 2).min(max);
        }
    }

    pub fn cmp_exact(&self, other: &RadicalSum) -> Result<Ordering, Undecided> {
        (self - other).sign()
    }

    pub fn is_positive(&self) -> Result<bool, Undecided> {
        Ok(self.sign()? == Ordering::Greater)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.to_f64() * t.radicand.to_f64().max(0.0).sqrt())
            .sum()
    }

    /// Decimal rendering with `digits` significant digits, from a certified
    /// enclosure rather than floating point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let (lo, hi) = self.enclosure(64 + 4 * digits as u32);
        let mid: BigRational = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        let v = mid.to_f64().unwrap_or(f64::NAN);
        format!("{:.*e}", digits.saturating_sub(1), v)
            .parse::<f64>()
            .map(|x| format!("{x}"))
            .unwrap_or_else(|_| format!("{v}"))
    }
}

impl From<Vec<Term>> for RadicalSum {
    fn from(terms: Vec<Term>) -> Self {
        let mut s = RadicalSum::zero();
        for t in terms {
            s.insert(t.coeff, t.radicand);
        }
        s
    }
}

impl From<RadicalSum> for Vec<Term> {
    fn from(s: RadicalSum) -> Self {
        s.terms
    }
}

impl From<QField> for RadicalSum {
    fn from(x: QField) -> Self {
        RadicalSum::from_field(x)
    }
}

impl PartialEq for RadicalSum {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for RadicalSum {}

impl fmt::Debug for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadicalSum({self} ≈ {})", self.to_f64())
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = if t.coeff.is_rational() || t.radicand == QField::one() {
                t.coeff.to_string()
            } else {
                format!("({})", t.coeff)
            };
            if t.radicand == QField::one() {
                write!(f, "{coeff}")?;
            } else {
                let rad = if t.radicand.is_rational() {
                    format!("√{}", t.radicand)
                } else {
                    format!("√({})", t.radicand)
                };
                if t.coeff == QField::one() {
                    write!(f, "{rad}")?;
                } else {
                    write!(f, "{coeff}·{rad}")?;
                }
            }
        }
        Ok(())
    }
}

impl<'a, 'b> Add<&'b RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &'b RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for t in &rhs.terms {
            out.insert(t.coeff.clone(), t.radicand.clone());
        }
        out
    }
}

impl<'a, 'b> Sub<&'b RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &'b RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for t in &rhs.terms {
            out.insert(-&t.coeff, t.radicand.clone());
        }
        out
    }
}

impl<'a, 'b> Mul<&'b RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &'b RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for x in &self.terms {
            for y in &rhs.terms {
                out.insert(&x.coeff * &y.coeff, &x.radicand * &y.radicand);
            }
        }
        out
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: -&t.coeff,
                    radicand: t.radicand.clone(),
                })
                .collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<RadicalSum> for RadicalSum {
            type Output = RadicalSum;
            fn $method(self, rhs: RadicalSum) -> RadicalSum {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b RadicalSum> for RadicalSum {
            type Output = RadicalSum;
            fn $method(self, rhs: &'b RadicalSum) -> RadicalSum {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        -&self
    }
}

/// A certified rational bracket around a radical sum.
#[derive(Clone, Debug)]
pub struct CertInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub bits: u32,
    pub payload: RadicalSum,
}

impl CertInterval {
    pub fn new(payload: RadicalSum) -> Self {
        let (lo, hi) = payload.enclosure(START_BITS);
        CertInterval {
            lo,
            hi,
            bits: START_BITS,
            payload,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Doubles the precision; returns false once the cap is reached.
    pub fn refine(&mut self) -> bool {
        let max = max_precision_bits();
        if self.bits >= max {
            return false;
        }
        self.bits = (self.bits * 2).min(max);
        let (lo, hi) = self.payload.enclosure(self.bits);
        self.lo = lo;
        self.hi = hi;
        true
    }

    /// Whether the bracket contains the given field value.
    pub fn contains_field(&self, x: &QField) -> bool {
        let (xl, xh) = x.enclosure(self.bits);
        xh >= self.lo && xl <= self.hi
    }
}

/// Compares two radical sums: equality is decided symbolically, strict
/// order by separating enclosures.
pub fn cmp_radical_sums(e1: &CertInterval, e2: &CertInterval) -> Result<Ordering, Undecided> {
    if e1.hi < e2.lo {
        return Ok(Ordering::Less);
    }
    if e2.hi < e1.lo {
        return Ok(Ordering::Greater);
    }
    e1.payload.cmp_exact(&e2.payload)
}
