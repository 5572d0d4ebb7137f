//! The number field Q(√2, √3).
//!
//! Elements are stored as `a + b√2 + c√3 + d√6` with reduced rational
//! coefficients, so equality is coefficient equality. Signs are decided
//! by a floating-point evaluation when its error bound excludes zero, and
//! otherwise exactly by viewing the field as the tower Q ⊂ Q(√2) ⊂ Q(√2)(√3)
//! and comparing squares of conjugate parts.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{ceil_sqrt_scaled, floor_sqrt_scaled, rat, sqrt_rational};

/// Exact element `a + b√2 + c√3 + d√6` of Q(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QField {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

/// Element `u + w√2` of the intermediate field Q(√2).
#[derive(Clone, PartialEq, Eq, Debug)]
struct Q2 {
    u: BigRational,
    w: BigRational,
}

impl Q2 {
    fn zero() -> Self {
        Q2 {
            u: BigRational::zero(),
            w: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.w.is_zero()
    }

    fn add(&self, o: &Q2) -> Q2 {
        Q2 {
            u: &self.u + &o.u,
            w: &self.w + &o.w,
        }
    }

    fn sub(&self, o: &Q2) -> Q2 {
        Q2 {
            u: &self.u - &o.u,
            w: &self.w - &o.w,
        }
    }

    fn mul(&self, o: &Q2) -> Q2 {
        let two = rat(2, 1);
        Q2 {
            u: &self.u * &o.u + two * &self.w * &o.w,
            w: &self.u * &o.w + &self.w * &o.u,
        }
    }

    fn scale(&self, k: &BigRational) -> Q2 {
        Q2 {
            u: &self.u * k,
            w: &self.w * k,
        }
    }

    fn neg(&self) -> Q2 {
        Q2 {
            u: -&self.u,
            w: -&self.w,
        }
    }

    /// Norm `u² − 2w²`, rational and nonzero for nonzero elements.
    fn norm(&self) -> BigRational {
        &self.u * &self.u - rat(2, 1) * &self.w * &self.w
    }

    fn inv(&self) -> Q2 {
        let n = self.norm();
        Q2 {
            u: &self.u / &n,
            w: -&self.w / &n,
        }
    }

    fn div(&self, o: &Q2) -> Q2 {
        self.mul(&o.inv())
    }

    fn sign(&self) -> Ordering {
        sign_pair(
            self.u.cmp(&BigRational::zero()),
            self.w.cmp(&BigRational::zero()),
            || {
                (&self.u * &self.u)
                    .cmp(&(rat(2, 1) * &self.w * &self.w))
            },
        )
    }

    fn sqrt(&self) -> Option<Q2> {
        if self.sign() == Ordering::Less {
            return None;
        }
        if self.w.is_zero() {
            if let Some(s) = sqrt_rational(&self.u) {
                return Some(Q2 {
                    u: s,
                    w: BigRational::zero(),
                });
            }
            // (s√2)² = 2s²
            return sqrt_rational(&(&self.u / rat(2, 1))).map(|s| Q2 {
                u: BigRational::zero(),
                w: s,
            });
        }
        // (α + β√2)² = α² + 2β² + 2αβ√2
        let disc = sqrt_rational(&self.norm())?;
        for root in [&self.u + &disc, &self.u - &disc] {
            let alpha_sq = root / rat(2, 1);
            if alpha_sq.is_zero() {
                continue;
            }
            if let Some(alpha) = sqrt_rational(&alpha_sq) {
                let beta = &self.w / (rat(2, 1) * &alpha);
                let s = Q2 { u: alpha, w: beta };
                if s.mul(&s) == *self {
                    return Some(if s.sign() == Ordering::Less { s.neg() } else { s });
                }
            }
        }
        None
    }
}

/// Sign of `x + y·√k` given the signs of `x` and `y` and a thunk comparing
/// `x²` against `k·y²`.
fn sign_pair(sx: Ordering, sy: Ordering, cmp_squares: impl FnOnce() -> Ordering) -> Ordering {
    use Ordering::*;
    match (sx, sy) {
        (Equal, s) | (s, Equal) => s,
        (a, b) if a == b => a,
        (Greater, Less) => cmp_squares(),
        (Less, Greater) => cmp_squares().reverse(),
        _ => unreachable!(),
    }
}

impl QField {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        QField { a, b, c, d }
    }

    /// Builds an element from integer ratios `(num, den)` for each coefficient.
    pub fn from_ratios(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Self {
        QField::new(rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1), rat(d.0, d.1))
    }

    /// Integer coefficients `a + b√2 + c√3 + d√6`.
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        QField::from_ratios((a, 1), (b, 1), (c, 1), (d, 1))
    }

    pub fn zero() -> Self {
        QField::default()
    }

    pub fn one() -> Self {
        QField::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        QField {
            a: r,
            ..QField::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        QField::from_rational(rat(n, 1))
    }

    pub fn sqrt2() -> Self {
        QField::from_ints(0, 1, 0, 0)
    }

    pub fn sqrt3() -> Self {
        QField::from_ints(0, 0, 1, 0)
    }

    pub fn sqrt6() -> Self {
        QField::from_ints(0, 0, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn scale(&self, k: &BigRational) -> QField {
        QField {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }

    pub fn square(&self) -> QField {
        self * self
    }

    // x = p + q√3 with p = a + b√2, q = c + d√2.
    fn split(&self) -> (Q2, Q2) {
        (
            Q2 {
                u: self.a.clone(),
                w: self.b.clone(),
            },
            Q2 {
                u: self.c.clone(),
                w: self.d.clone(),
            },
        )
    }

    fn join(p: Q2, q: Q2) -> QField {
        QField {
            a: p.u,
            b: p.w,
            c: q.u,
            d: q.w,
        }
    }

    /// Sign from a floating-point evaluation when its rounding error bound
    /// separates it from zero.
    fn float_sign(&self) -> Option<Ordering> {
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for (coef, root) in [
            (&self.a, 1.0),
            (&self.b, std::f64::consts::SQRT_2),
            (&self.c, 3f64.sqrt()),
            (&self.d, 6f64.sqrt()),
        ] {
            if coef.is_zero() {
                continue;
            }
            let c = coef.to_f64()?;
            if !c.is_normal() || c.abs() > 1e250 || c.abs() < 1e-250 {
                return None;
            }
            value += c * root;
            magnitude += c.abs() * root;
        }
        // each term carries at most a few ulps from conversion, the constant
        // and the product; additions add a few more
        let bound = magnitude * 16.0 * f64::EPSILON;
        if value > bound {
            Some(Ordering::Greater)
        } else if value < -bound {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Exact sign.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(s) = self.float_sign() {
            return s;
        }
        self.exact_sign()
    }

    fn exact_sign(&self) -> Ordering {
        let (p, q) = self.split();
        let (sp, sq) = (p.sign(), q.sign());
        sign_pair(sp, sq, || {
            // p² − 3q² ∈ Q(√2)
            p.mul(&p).sub(&q.mul(&q).scale(&rat(3, 1))).sign()
        })
    }

    /// Sign as an integer in {-1, 0, 1}.
    pub fn signum(&self) -> i8 {
        match self.sign() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// Exact ordering of real values (distinct from the derived coefficient
    /// ordering used for canonical sorting).
    pub fn cmp_value(&self, other: &QField) -> Ordering {
        (self - other).sign()
    }

    pub fn abs(&self) -> QField {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<QField> {
        if self.is_zero() {
            return None;
        }
        let (p, q) = self.split();
        // 1/(p + q√3) = (p − q√3) / (p² − 3q²)
        let n = p.mul(&p).sub(&q.mul(&q).scale(&rat(3, 1)));
        let ninv = n.inv();
        Some(QField::join(p.mul(&ninv), q.neg().mul(&ninv)))
    }

    /// Nonnegative square root inside the field, if one exists.
    pub fn sqrt_exact(&self) -> Option<QField> {
        match self.sign() {
            Ordering::Less => return None,
            Ordering::Equal => return Some(QField::zero()),
            Ordering::Greater => {}
        }
        let (p, q) = self.split();
        let candidate = if q.is_zero() {
            if let Some(s) = p.sqrt() {
                Some(QField::join(s, Q2::zero()))
            } else {
                // (s√3)² = 3s²
                p.scale(&rat(1, 3))
                    .sqrt()
                    .map(|s| QField::join(Q2::zero(), s))
            }
        } else {
            // (α + β√3)² = α² + 3β² + 2αβ√3
            let disc = p.mul(&p).sub(&q.mul(&q).scale(&rat(3, 1)));
            let root = disc.sqrt();
            root.and_then(|root| {
                [p.add(&root), p.sub(&root)].into_iter().find_map(|r| {
                    let alpha_sq = r.scale(&rat(1, 2));
                    if alpha_sq.is_zero() {
                        return None;
                    }
                    let alpha = alpha_sq.sqrt()?;
                    let beta = q.div(&alpha.scale(&rat(2, 1)));
                    let s = QField::join(alpha, beta);
                    (s.square() == *self).then_some(s)
                })
            })
        };
        candidate.map(|s| if s.is_negative() { -s } else { s })
    }

    /// Rational enclosure `[lo, hi]` using dyadic bounds on √2, √3, √6 with
    /// `bits` fractional bits.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = self.a.clone();
        let mut hi = self.a.clone();
        for (coef, k) in [(&self.b, 2), (&self.c, 3), (&self.d, 6)] {
            if coef.is_zero() {
                continue;
            }
            let kr = rat(k, 1);
            let (sl, sh) = (floor_sqrt_scaled(&kr, bits), ceil_sqrt_scaled(&kr, bits));
            if coef.is_positive() {
                lo += coef * &sl;
                hi += coef * &sh;
            } else {
                lo += coef * &sh;
                hi += coef * &sl;
            }
        }
        (lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        f(&self.a)
            + f(&self.b) * std::f64::consts::SQRT_2
            + f(&self.c) * 3f64.sqrt()
            + f(&self.d) * 6f64.sqrt()
    }

    /// Least common denominator of the four coefficients.
    pub(crate) fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }

    fn coefficient_strings(&self) -> [String; 4] {
        [
            self.a.to_string(),
            self.b.to_string(),
            self.c.to_string(),
            self.d.to_string(),
        ]
    }
}

impl fmt::Debug for QField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QField({self})")
    }
}

impl fmt::Display for QField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (coef, unit) in [(&self.a, ""), (&self.b, "√2"), (&self.c, "√3"), (&self.d, "√6")] {
            if coef.is_zero() {
                continue;
            }
            let body = if unit.is_empty() {
                coef.abs().to_string()
            } else if coef.abs().is_one() {
                unit.to_string()
            } else {
                format!("{}{}", coef.abs(), unit)
            };
            let sign = if coef.is_negative() { "-" } else { "+" };
            parts.push((sign, body));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (sign, body)) in parts.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b QField> for &'a QField {
            type Output = QField;
            fn $method(self, rhs: &'b QField) -> QField {
                let f: fn(&QField, &QField) -> QField = $body;
                f(self, rhs)
            }
        }
        impl $trait<QField> for QField {
            type Output = QField;
            fn $method(self, rhs: QField) -> QField {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b QField> for QField {
            type Output = QField;
            fn $method(self, rhs: &'b QField) -> QField {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<QField> for &'a QField {
            type Output = QField;
            fn $method(self, rhs: QField) -> QField {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QField {
    a: &x.a + &y.a,
    b: &x.b + &y.b,
    c: &x.c + &y.c,
    d: &x.d + &y.d,
});

forward_binop!(Sub, sub, |x, y| QField {
    a: &x.a - &y.a,
    b: &x.b - &y.b,
    c: &x.c - &y.c,
    d: &x.d - &y.d,
});

// basis products: eᵢ·eⱼ = k·eₘ over the basis (1, √2, √3, √6)
const BASIS_PRODUCT: [[(i64, usize); 4]; 4] = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (2, 0), (1, 3), (2, 2)],
    [(1, 2), (1, 3), (3, 0), (3, 1)],
    [(1, 3), (2, 2), (3, 1), (6, 0)],
];

fn coeffs(x: &QField) -> [&BigRational; 4] {
    [&x.a, &x.b, &x.c, &x.d]
}

// skips zero coefficients, which dominate for points of one family
forward_binop!(Mul, mul, |x, y| {
    let mut out: [BigRational; 4] = Default::default();
    for (i, xi) in coeffs(x).into_iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in coeffs(y).into_iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let (k, m) = BASIS_PRODUCT[i][j];
            let p = xi * yj;
            if k == 1 {
                out[m] += p;
            } else {
                out[m] += p * BigInt::from(k);
            }
        }
    }
    let [a, b, c, d] = out;
    QField { a, b, c, d }
});

forward_binop!(Div, div, |x, y| x * y.inv().expect("division by zero in QField"));

impl Neg for QField {
    type Output = QField;
    fn neg(self) -> QField {
        -&self
    }
}

impl Neg for &QField {
    type Output = QField;
    fn neg(self) -> QField {
        QField {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl AddAssign<&QField> for QField {
    fn add_assign(&mut self, rhs: &QField) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.c += &rhs.c;
        self.d += &rhs.d;
    }
}

impl SubAssign<&QField> for QField {
    fn sub_assign(&mut self, rhs: &QField) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
        self.c -= &rhs.c;
        self.d -= &rhs.d;
    }
}

impl From<i64> for QField {
    fn from(n: i64) -> Self {
        QField::from_int(n)
    }
}

impl Serialize for QField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coefficient_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = <[String; 4]>::deserialize(d)?;
        let parse = |s: &str| BigRational::from_str(s).map_err(serde::de::Error::custom);
        Ok(QField::new(
            parse(&parts[0])?,
            parse(&parts[1])?,
            parse(&parts[2])?,
            parse(&parts[3])?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, c: i64, d: i64) -> QField {
        QField::from_ints(a, b, c, d)
    }

    #[test]
    fn product_identities() {
        assert_eq!(q(0, 1, 0, 0) * q(0, 0, 1, 0), q(0, 0, 0, 1));
        let x = QField::from_ratios((3, 4), (-1, 2), (5, 1), (0, 1));
        assert_eq!(QField::one() * &x, x);
        assert_eq!(q(0, 1, 1, 0).square(), q(5, 0, 0, 2));
        assert_eq!(q(0, 1, 0, 0) * q(0, 0, 0, 1), q(0, 0, 2, 0));
        assert_eq!(q(0, 0, 1, 0) * q(0, 0, 0, 1), q(0, 3, 0, 0));
    }

    #[test]
    fn signs_of_small_combinations() {
        assert_eq!(q(0, 0, 0, 0).signum(), 0);
        assert_eq!(q(1, 1, -1, 0).signum(), 1);
        assert_eq!(q(-1, 1, 1, -1).signum(), -1);
        assert_eq!(q(5, 0, 0, -2).signum(), 1); // 5 - 2√6 = (√3-√2)²
        assert_eq!(q(-5, 0, 0, 2).signum(), -1);
    }

    #[test]
    fn inverse_round_trips() {
        let x = q(1, 1, -1, 2);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, QField::one());
        assert!(QField::zero().inv().is_none());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(5, 0, 0, 2).sqrt_exact(), Some(q(0, 1, 1, 0)));
        assert_eq!(q(4, 0, 2, 0).sqrt_exact(), Some(q(1, 0, 1, 0)));
        assert_eq!(q(3, 0, 0, 0).sqrt_exact(), Some(q(0, 0, 1, 0)));
        assert_eq!(q(12, 0, 0, 0).sqrt_exact(), Some(q(0, 0, 2, 0)));
        assert_eq!(q(6, 0, 0, 0).sqrt_exact(), Some(q(0, 0, 0, 1)));
        assert_eq!(q(7, 0, 0, 0).sqrt_exact(), None);
        assert_eq!(q(-4, 0, 0, 0).sqrt_exact(), None);
        // √(2+√3) = (√2+√6)/2
        let s = QField::from_ratios((0, 1), (1, 2), (0, 1), (1, 2));
        assert_eq!(q(2, 0, 1, 0).sqrt_exact(), Some(s));
    }

    #[test]
    fn enclosure_contains_value() {
        let x = q(-1, 1, 1, -1);
        let (lo, hi) = x.enclosure(40);
        let v = x.to_f64();
        assert!(lo.to_f64().unwrap() <= v + 1e-12 && v - 1e-12 <= hi.to_f64().unwrap());
        assert!(hi < BigRational::zero());
    }

    #[test]
    fn serde_round_trip() {
        let x = QField::from_ratios((1, 2), (0, 1), (-3, 7), (2, 1));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"["1/2","0","-3/7","2"]"#);
        let y: QField = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(q(1, 0, -2, 0).to_string(), "1 - 2√3");
        assert_eq!(QField::from_ratios((0, 1), (0, 1), (1, 2), (0, 1)).to_string(), "1/2√3");
        assert_eq!(QField::zero().to_string(), "0");
    }

    #[test]
    fn near_cancellation_uses_exact_path() {
        // (√3 − √2)^8 is tiny but positive; its expansion has large coefficients
        let mut x = q(0, -1, 1, 0);
        for _ in 0..3 {
            x = x.square();
        }
        assert!(x.float_sign().is_none() || x.float_sign() == Some(Ordering::Greater));
        assert_eq!(x.sign(), Ordering::Greater);
        let tiny = &x - &QField::from_rational(rat(1, 1_000_000_000));
        assert_eq!(tiny.sign(), tiny.exact_sign());
    }

    proptest::proptest! {
        #[test]
        fn float_filter_agrees_with_exact(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50, k in 1i64..6) {
            let x = q(a, b, c, d);
            let y = x.square() - QField::from_int(k) * q(0, 1, 0, 0).square();
            proptest::prop_assert_eq!(x.sign(), x.exact_sign());
            proptest::prop_assert_eq!(y.sign(), y.exact_sign());
        }
    }
}
