//! Helpers around [`BigRational`], the coefficient field of every
//! polynomial in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` reduced to lowest terms. Panics if `d == 0`.
pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a`, `-a`, `a/b` or `-a/b` with decimal digits.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    if den.starts_with(['-', '+']) {
        return None;
    }
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Renders as `a` for integers and `a/b` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Greatest common divisor of the numerators (0 for an empty or all-zero slice).
pub fn gcd_numerators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v.numer()))
}

/// Scales `values` by the unique positive rational that makes them integers
/// with content 1. Returns the scale used. All-zero input is left untouched.
pub fn make_primitive(values: &mut [Rat]) -> Rat {
    let l = lcm_denominators(values.iter());
    let scaled: Vec<Rat> = values.iter().map(|v| v * Rat::from_integer(l.clone())).collect();
    let g = gcd_numerators(scaled.iter());
    if g.is_zero() {
        return Rat::one();
    }
    let factor = Rat::new(l, g.abs());
    for v in values.iter_mut() {
        *v = &*v * &factor;
    }
    factor
}
