//! Helpers around [`BigRational`]: parsing, canonical printing, square roots
//! and squarefree parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::FieldError;

/// Builds `n/d` from machine integers. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` (optional leading sign, no spaces).
pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(FieldError::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always writes `p/q`, including `q = 1`.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Writes `p` for integers and `p/q` otherwise; used for human-facing output.
pub fn format_rational_short(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format_rational(q)
    }
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact rational square root, if one exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = integer_sqrt_exact(q.numer())?;
    let d = integer_sqrt_exact(q.denom())?;
    Some(BigRational::new(n, d))
}

pub fn is_rational_square(q: &BigRational) -> bool {
    rational_sqrt(q).is_some()
}

/// Writes a nonzero rational as `s * t^2` with `s` a squarefree integer and
/// `t` rational, returning `(s, t)`.
pub fn squarefree_decomposition(
    q: &BigRational,
    bound: u64,
) -> Result<(BigInt, BigRational), FieldError> {
    if q.is_zero() {
        return Err(FieldError::ZeroArgument);
    }
    // q = n/d = n*d / d^2
    let m = q.numer() * q.denom();
    let fac = super::primes::factor(&m.abs(), bound)?;
    let mut s = if m.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut t = BigInt::one();
    for (p, e) in fac {
        if e % 2 == 1 {
            s *= &p;
        }
        t *= num_traits::pow(p, (e / 2) as usize);
    }
    Ok((s, BigRational::new(t, q.denom().clone())))
}

/// `v_p(q)` for a nonzero rational.
pub fn valuation(q: &BigRational, p: &BigInt) -> i64 {
    fn val(n: &BigInt, p: &BigInt) -> i64 {
        let mut n = n.clone();
        let mut v = 0;
        while !n.is_zero() && n.is_multiple_of(p) {
            n /= p;
            v += 1;
        }
        v
    }
    val(q.numer(), p) - val(q.denom(), p)
}
