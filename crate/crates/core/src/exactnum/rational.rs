use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Rational square root when both numerator and denominator are squares.
pub fn sqrt_rational(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    Some(BigRational::new(exact_isqrt(x.numer())?, exact_isqrt(x.denom())?))
}

fn pow2(bits: u32) -> BigInt {
    BigInt::from(1u8) << bits as usize
}

/// `floor(√x · 2^bits) / 2^bits`, a lower bound for `√x` (0 for x ≤ 0).
pub fn floor_sqrt_scaled(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let scaled = (x * BigRational::from(pow2(2 * bits))).floor().to_integer();
    BigRational::new(scaled.sqrt(), pow2(bits))
}

/// `ceil(√x · 2^bits) / 2^bits`, an upper bound for `√x` (0 for x ≤ 0).
pub fn ceil_sqrt_scaled(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let scaled = (x * BigRational::from(pow2(2 * bits))).ceil().to_integer();
    let mut s = scaled.sqrt();
    if &s * &s < scaled {
        s += 1;
    }
    BigRational::new(s, pow2(bits))
}

/// Largest `s` with `s² | n` for small `n`, by trial division; gives up on
/// factors above `limit` and returns the partial square part.
pub fn square_part(n: &BigInt, limit: u64) -> BigInt {
    let mut n = n.abs();
    let mut out = BigInt::from(1u8);
    let mut p = 2u64;
    while p <= limit {
        let pp = BigInt::from(p * p);
        if pp > n {
            break;
        }
        let bp = BigInt::from(p);
        while (&n % &pp).is_zero() {
            n /= &pp;
            out *= &bp;
        }
        while (&n % &bp).is_zero() {
            n /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots() {
        assert_eq!(sqrt_rational(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_rational(&rat(2, 1)), None);
        assert_eq!(sqrt_rational(&rat(-1, 1)), None);
    }

    #[test]
    fn scaled_bounds_bracket() {
        for bits in [0, 3, 20, 90] {
            let lo = floor_sqrt_scaled(&rat(2, 1), bits);
            let hi = ceil_sqrt_scaled(&rat(2, 1), bits);
            assert!(&lo * &lo <= rat(2, 1));
            assert!(&hi * &hi >= rat(2, 1));
            assert!(hi > lo);
        }
        assert_eq!(ceil_sqrt_scaled(&rat(9, 1), 4), rat(3, 1));
    }

    #[test]
    fn square_parts() {
        assert_eq!(square_part(&BigInt::from(72), 1000), BigInt::from(6));
        assert_eq!(square_part(&BigInt::from(11), 1000), BigInt::from(1));
        assert_eq!(square_part(&BigInt::from(0), 1000), BigInt::from(1));
    }
}
