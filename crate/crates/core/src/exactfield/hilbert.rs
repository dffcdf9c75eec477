//! Local invariants of rational quaternion algebras.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::primes::{factor, is_prime, prime_divisors, DEFAULT_TRIAL_BOUND};
use super::rational::{integer_sqrt_exact, valuation};
use super::FieldError;

/// A place of Q: a prime or the real place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u128),
    Infinity,
}

impl Place {
    /// A prime place; `p` must pass the primality test.
    pub fn prime(p: u128) -> Result<Place, FieldError> {
        if is_prime(&BigInt::from(p))? {
            Ok(Place::Prime(p))
        } else {
            Err(FieldError::NotPrime(p.to_string()))
        }
    }

    fn from_bigint(p: &BigInt) -> Result<Place, FieldError> {
        p.to_u128()
            .map(Place::Prime)
            .ok_or_else(|| FieldError::FactorizationLimit(p.to_string()))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Place::Prime(p) => s.serialize_u128(*p),
            Place::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(p) => Place::prime(p as u128).map_err(serde::de::Error::custom),
            Raw::S(s) if s == "inf" => Ok(Place::Infinity),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad place {s}"))),
        }
    }
}

/// Legendre symbol (n/p) for an odd prime p, with n prime to p.
fn legendre(n: &BigInt, p: &BigInt) -> i8 {
    let e = (p - BigInt::one()) >> 1;
    let r = n.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Removes all factors of p from a nonzero rational and returns the unit part.
fn unit_part(q: &BigRational, p: &BigInt) -> BigRational {
    let v = valuation(q, p);
    let pv = num_traits::pow(BigRational::from_integer(p.clone()), v.unsigned_abs() as usize);
    if v >= 0 {
        q / pv
    } else {
        q * pv
    }
}

/// The Hilbert symbol (a, b)_v ∈ {+1, −1}.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: Place) -> Result<i8, FieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(FieldError::ZeroArgument);
    }
    let p = match v {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        Place::Prime(p) => BigInt::from(p),
    };
    let (al, be) = (valuation(a, &p), valuation(b, &p));
    let (u, w) = (unit_part(a, &p), unit_part(b, &p));
    if p == BigInt::from(2) {
        let m8 = |q: &BigRational| -> i64 {
            // odd n/d is congruent to n*d modulo 8
            (q.numer() * q.denom()).mod_floor(&BigInt::from(8)).to_i64().unwrap()
        };
        let (u8_, w8) = (m8(&u), m8(&w));
        let eps = |x: i64| ((x - 1) / 2) & 1;
        let omega = |x: i64| ((x * x - 1) / 8) & 1;
        let e = eps(u8_) * eps(w8) + al.rem_euclid(2) * omega(w8) + be.rem_euclid(2) * omega(u8_);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let leg = |q: &BigRational| legendre(q.numer(), &p) * legendre(q.denom(), &p);
    let eps_p = ((&p - BigInt::one()) >> 1usize).is_odd();
    let mut s: i8 = if (al * be).rem_euclid(2) == 1 && eps_p { -1 } else { 1 };
    if be.rem_euclid(2) == 1 {
        s *= leg(&u);
    }
    if al.rem_euclid(2) == 1 {
        s *= leg(&w);
    }
    Ok(s)
}

/// The places where the quaternion algebra (a, b)_Q ramifies.
///
/// Only 2, the primes dividing numerators and denominators of a and b, and
/// the real place can ramify, so only those are tested.
pub fn quaternion_ramification(
    a: &BigRational,
    b: &BigRational,
) -> Result<BTreeSet<Place>, FieldError> {
    quaternion_ramification_with_bound(a, b, DEFAULT_TRIAL_BOUND)
}

pub fn quaternion_ramification_with_bound(
    a: &BigRational,
    b: &BigRational,
    bound: u64,
) -> Result<BTreeSet<Place>, FieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(FieldError::ZeroArgument);
    }
    let mut candidates: BTreeSet<BigInt> = BTreeSet::new();
    candidates.insert(BigInt::from(2));
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        candidates.extend(prime_divisors(n, bound)?);
    }
    let mut out = BTreeSet::new();
    for p in candidates {
        let place = Place::from_bigint(&p)?;
        if hilbert_symbol(a, b, place)? == -1 {
            out.insert(place);
        }
    }
    if hilbert_symbol(a, b, Place::Infinity)? == -1 {
        out.insert(Place::Infinity);
    }
    Ok(out)
}

/// Decides whether q = x² + y² for rationals x, y.
pub fn is_sum_of_two_rational_squares(q: &BigRational) -> Result<bool, FieldError> {
    is_sum_of_two_rational_squares_with_bound(q, DEFAULT_TRIAL_BOUND)
}

pub fn is_sum_of_two_rational_squares_with_bound(
    q: &BigRational,
    bound: u64,
) -> Result<bool, FieldError> {
    if q.is_negative() {
        return Ok(false);
    }
    if q.is_zero() {
        return Ok(true);
    }
    let m = q.numer() * q.denom();
    let three = BigInt::from(3);
    let four = BigInt::from(4);
    Ok(factor(&m, bound)?
        .iter()
        .all(|(p, e)| e % 2 == 0 || p.mod_floor(&four) != three))
}

/// Searches for an explicit representation q = x² + y²; `limit` caps the
/// size of num·den that will be scanned.
pub fn two_squares_witness(q: &BigRational, limit: u64) -> Option<(BigRational, BigRational)> {
    if q.is_negative() {
        return None;
    }
    let m = q.numer() * q.denom();
    if m > BigInt::from(limit) {
        return None;
    }
    let d = BigRational::from_integer(q.denom().clone());
    let mut x = BigInt::zero();
    let top = m.sqrt();
    while x <= top {
        if let Some(y) = integer_sqrt_exact(&(&m - &x * &x)) {
            return Some((
                BigRational::from_integer(x) / &d,
                BigRational::from_integer(y) / &d,
            ));
        }
        x += 1;
    }
    None
}
