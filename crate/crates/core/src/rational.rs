//! Exact rational values and the text forms used by the file formats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-n`.
pub fn dyadic(n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n as usize)
}

/// Always `p/q`, even for integers, so the line formats stay uniform.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Common-denominator integer image of a slice of rationals, used by the
/// exhaustive scanners. `None` when the denominators or numerators do not fit.
pub(crate) fn scaled_u64(values: &[Rational]) -> Option<(u64, Vec<u64>)> {
    let mut denom = BigInt::one();
    for v in values {
        denom = num_integer::Integer::lcm(&denom, v.denom());
        // keep sums of two values representable
        if denom.bits() > 60 {
            return None;
        }
    }
    let mut nums = Vec::with_capacity(values.len());
    for v in values {
        if v.is_negative() {
            return None;
        }
        let n = v.numer() * (&denom / v.denom());
        nums.push(n.to_u64()?);
    }
    let d = denom.to_u64()?;
    if nums.iter().any(|&n| n > d.saturating_mul(2)) {
        return None;
    }
    Some((d, nums))
}
