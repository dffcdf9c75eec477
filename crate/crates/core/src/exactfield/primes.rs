//! Trial division with an explicit bound, backed by a deterministic
//! Miller-Rabin test for the leftover cofactor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FieldError;

/// Default trial-division bound used by the number-theoretic predicates.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Miller-Rabin with the first thirteen prime bases is deterministic below
/// this value (3.317e24).
fn mr_deterministic_limit() -> BigInt {
    "3317044064679887385961981".parse().unwrap()
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Primality for integers below the deterministic Miller-Rabin limit.
/// Larger inputs are rejected rather than answered probabilistically.
pub fn is_prime(n: &BigInt) -> Result<bool, FieldError> {
    if n < &BigInt::from(2) {
        return Ok(false);
    }
    for &b in &MR_BASES {
        let b = BigInt::from(b);
        if *n == b {
            return Ok(true);
        }
        if n.is_multiple_of(&b) {
            return Ok(false);
        }
    }
    if *n >= mr_deterministic_limit() {
        return Err(FieldError::FactorizationLimit(n.to_string()));
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for &b in &MR_BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Factors `|n|` (n ≠ 0) into `(prime, exponent)` pairs in increasing order.
///
/// Trial division runs up to `bound`. A leftover cofactor is accepted when it
/// is provably prime, either because it is below `bound²` or because the
/// deterministic Miller-Rabin test certifies it; anything else is an error.
pub fn factor(n: &BigInt, bound: u64) -> Result<Vec<(BigInt, u32)>, FieldError> {
    if n.is_zero() {
        return Err(FieldError::ZeroArgument);
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut push = |p: BigInt, m: &mut BigInt| {
        let mut e = 0;
        while m.is_multiple_of(&p) {
            *m /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(BigInt::from(2), &mut m);
    let mut p: u64 = 3;
    while p <= bound {
        if m.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        push(pb, &mut m);
        p += 2;
    }
    if !m.is_one() {
        let bb = BigInt::from(bound);
        let certified = m < &bb * &bb || is_prime(&m)?;
        if !certified {
            return Err(FieldError::FactorizationLimit(n.to_string()));
        }
        out.push((m, 1));
    }
    Ok(out)
}

/// Distinct prime divisors of a nonzero integer.
pub fn prime_divisors(n: &BigInt, bound: u64) -> Result<Vec<BigInt>, FieldError> {
    Ok(factor(n, bound)?.into_iter().map(|(p, _)| p).collect())
}

/// Convenience for small primes in tests and CLI output.
pub fn to_u64(p: &BigInt) -> Option<u64> {
    p.to_u64()
}
