//! Local solubility of `a x² + b y² = z²` at an odd prime by exhaustive
//! search modulo p², which suffices once the valuations of a and b are
//! reduced to 0 or 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Integer in the same square class as `q` whose p-adic valuation is 0 or 1,
/// reduced modulo p².
fn reduce(q: &BigRational, p: i64) -> i64 {
    assert!(!q.is_zero());
    let d = q.denom();
    let mut n: BigInt = q.numer() * d;
    let pp = BigInt::from(p * p);
    while n.is_multiple_of(&pp) {
        n /= &pp;
    }
    n.mod_floor(&pp).to_i64().unwrap()
}

/// +1 when `a x² + b y² = z²` has a nontrivial p-adic solution, else −1.
pub fn hilbert_symbol_bruteforce(a: &BigRational, b: &BigRational, p: i64) -> i8 {
    assert!(p > 2 && (2..p).all(|d| p % d != 0), "odd prime expected");
    let m = p * p;
    let (a, b) = (reduce(a, p), reduce(b, p));
    let mut square = vec![false; m as usize];
    for z in 0..m {
        square[(z * z % m) as usize] = true;
    }
    for x in 0..m {
        for y in 0..m {
            if x % p == 0 && y % p == 0 {
                continue;
            }
            if square[((a * x * x + b * y * y) % m) as usize] {
                return 1;
            }
        }
    }
    -1
}

/// The real symbol: −1 exactly when both arguments are negative.
pub fn real_symbol(a: &BigRational, b: &BigRational) -> i8 {
    if a.is_negative() && b.is_negative() {
        -1
    } else {
        1
    }
}
