//! Elements of the cyclotomic field Q(ζₙ), stored in the power basis
//! `1, ζ, …, ζ^{φ(n)-1}` with exact rational coefficients.
//!
//! Rational elements embed in every Q(ζₙ), so arithmetic between a rational
//! element of one order and an arbitrary element of another order is allowed
//! and yields the larger field. Mixing two irrational elements of different
//! orders is an [`FieldError::OrderMismatch`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational};
use super::FieldError;

/// The order used throughout the crate: Q(ζ₂₄) contains i, √2, √3 and the
/// 8th and 12th roots of unity.
pub const DEFAULT_ORDER: u32 = 24;

/// Largest supported order; tables are cached per order.
pub const MAX_ORDER: u32 = 120;

pub(crate) struct CycTables {
    pub phi: usize,
    /// `reduce[k]` = coordinates of ζ^k (0 ≤ k < n) in the power basis.
    reduce: Vec<Vec<i64>>,
    /// Residues k mod n with gcd(k, n) = 1, in increasing order.
    units: Vec<u32>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Integer coefficients of Φₙ(x), lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for all proper divisors d of n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

impl CycTables {
    fn build(order: u32) -> CycTables {
        let phi_poly = cyclotomic_polynomial(order);
        let phi = phi_poly.len() - 1;
        let mut reduce = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; phi];
        if phi > 0 {
            cur[0] = 1;
        }
        for _ in 0..order {
            reduce.push(cur.clone());
            // multiply by x and reduce with x^phi = -(lower coefficients)
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for j in 0..phi {
                cur[j] -= top * phi_poly[j];
            }
        }
        let units = (1..=order).filter(|&k| gcd(k % order, order) == 1).map(|k| k % order).collect();
        let mut units: Vec<u32> = units;
        units.sort_unstable();
        CycTables { phi, reduce, units }
    }
}

pub(crate) fn tables(order: u32) -> Result<Arc<CycTables>, FieldError> {
    static CACHE: OnceLock<Vec<OnceLock<Arc<CycTables>>>> = OnceLock::new();
    if order == 0 || order > MAX_ORDER {
        return Err(FieldError::UnsupportedOrder(order));
    }
    let cache = CACHE.get_or_init(|| (0..=MAX_ORDER).map(|_| OnceLock::new()).collect());
    Ok(cache[order as usize]
        .get_or_init(|| Arc::new(CycTables::build(order)))
        .clone())
}

fn tables24() -> Arc<CycTables> {
    tables(DEFAULT_ORDER).expect("default order is supported")
}

/// An element of Q(ζₙ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicElem {
    order: u32,
    coeffs: Vec<BigRational>,
}

/// The four field operations accepted by [`cyc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic; the only failures are division by zero and
/// incompatible orders.
pub fn cyc_arith(
    a: &CyclotomicElem,
    b: &CyclotomicElem,
    op: ArithOp,
) -> Result<CyclotomicElem, FieldError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_add(&b.neg_ref()),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_mul(&b.try_inv()?),
    }
}

impl CyclotomicElem {
    /// The rational number `q` in Q(ζ₂₄).
    pub fn from_rational(q: BigRational) -> Self {
        Self::from_rational_in(DEFAULT_ORDER, q).expect("default order")
    }

    pub fn from_rational_in(order: u32, q: BigRational) -> Result<Self, FieldError> {
        let t = tables(order)?;
        let mut coeffs = vec![BigRational::zero(); t.phi];
        coeffs[0] = q;
        Ok(CyclotomicElem { order, coeffs })
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Builds an element from power-basis coordinates of length φ(n).
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Result<Self, FieldError> {
        let t = tables(order)?;
        if coeffs.len() != t.phi {
            return Err(FieldError::Parse(format!(
                "expected {} coefficients for order {}, got {}",
                t.phi,
                order,
                coeffs.len()
            )));
        }
        Ok(CyclotomicElem { order, coeffs })
    }

    /// ζₙ^k for any integer k.
    pub fn zeta_power_in(order: u32, k: i64) -> Result<Self, FieldError> {
        let t = tables(order)?;
        let k = k.rem_euclid(order as i64) as usize;
        Ok(Self::from_int_row(order, &t.reduce[k]))
    }

    /// ζ₂₄^k.
    pub fn zeta_power(k: i64) -> Self {
        Self::zeta_power_in(DEFAULT_ORDER, k).expect("default order")
    }

    /// The imaginary unit ζ₂₄⁶.
    pub fn i() -> Self {
        Self::zeta_power(6)
    }

    /// √3 = ζ₁₂ + ζ₁₂⁻¹ inside Q(ζ₂₄).
    pub fn sqrt3() -> Self {
        &Self::zeta_power(2) + &Self::zeta_power(-2)
    }

    /// `(√3)^k` for any integer k, computed as `3^{⌊k/2⌋}` times `√3` when k is odd.
    pub fn sqrt3_pow(k: i64) -> Self {
        let half = k.div_euclid(2);
        let three = BigRational::from_integer(3.into());
        let base = if half >= 0 {
            num_traits::pow(three, half as usize)
        } else {
            num_traits::pow(three, (-half) as usize).recip()
        };
        let r = Self::from_rational(base);
        if k.rem_euclid(2) == 1 {
            &r * &Self::sqrt3()
        } else {
            r
        }
    }

    /// `re + i·im` with rational parts.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        &Self::from_rational(re) + &Self::i().scale(&im)
    }

    fn from_int_row(order: u32, row: &[i64]) -> Self {
        CyclotomicElem {
            order,
            coeffs: row.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Lies in Q(i): fixed by every automorphism ζ ↦ ζ^k with k ≡ 1 (mod 4).
    pub fn in_q_i(&self) -> bool {
        if self.is_rational() {
            return true;
        }
        if self.order % 4 != 0 {
            return false;
        }
        self.fixed_by(|k| k % 4 == 1)
    }

    /// Lies in Q(√3): fixed by every automorphism ζ ↦ ζ^k with k ≡ ±1 (mod 12).
    pub fn in_q_sqrt3(&self) -> bool {
        if self.is_rational() {
            return true;
        }
        if self.order % 12 != 0 {
            return false;
        }
        self.fixed_by(|k| k % 12 == 1 || k % 12 == 11)
    }

    fn fixed_by(&self, keep: impl Fn(u32) -> bool) -> bool {
        let t = tables(self.order).expect("valid order");
        t.units
            .iter()
            .filter(|&&k| keep(k))
            .all(|&k| self.galois(k) == *self)
    }

    /// The automorphism ζ ↦ ζ^k (k a unit mod n).
    pub fn galois(&self, k: u32) -> Self {
        let t = tables(self.order).expect("valid order");
        let n = self.order as usize;
        let mut acc = vec![BigRational::zero(); t.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.reduce[(j * k as usize) % n];
            for (a, &r) in acc.iter_mut().zip(row) {
                if r != 0 {
                    *a += c * BigRational::from_integer(r.into());
                }
            }
        }
        CyclotomicElem { order: self.order, coeffs: acc }
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        self.galois(self.order - 1)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicElem {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn neg_ref(&self) -> Self {
        CyclotomicElem {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn lift_to(&self, order: u32) -> Result<Self, FieldError> {
        if self.order == order {
            Ok(self.clone())
        } else {
            Self::from_rational_in(order, self.coeffs[0].clone())
        }
    }

    fn common_order(&self, other: &Self) -> Result<u32, FieldError> {
        if self.order == other.order {
            Ok(self.order)
        } else if self.is_rational() {
            Ok(other.order)
        } else if other.is_rational() {
            Ok(self.order)
        } else {
            Err(FieldError::OrderMismatch(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        let n = self.common_order(other)?;
        let (a, b) = (self.lift_to(n)?, other.lift_to(n)?);
        Ok(CyclotomicElem {
            order: n,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        if self.is_rational() && (other.order == self.order || !other.is_rational()) {
            return Ok(other.scale(&self.coeffs[0]));
        }
        if other.is_rational() {
            return Ok(self.scale(&other.coeffs[0]));
        }
        let n = self.common_order(other)?;
        let t = tables(n)?;
        let nn = n as usize;
        let mut wide = vec![BigRational::zero(); nn];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                wide[(i + j) % nn] += x * y;
            }
        }
        let mut coeffs: Vec<BigRational> = wide[..t.phi].to_vec();
        for (k, w) in wide.iter().enumerate().skip(t.phi) {
            if w.is_zero() {
                continue;
            }
            for (c, &r) in coeffs.iter_mut().zip(&t.reduce[k]) {
                if r != 0 {
                    *c += w * BigRational::from_integer(r.into());
                }
            }
        }
        Ok(CyclotomicElem { order: n, coeffs })
    }

    /// The field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let t = tables(self.order).expect("valid order");
        let mut acc = self.clone();
        for &k in t.units.iter().filter(|&&k| k != 1) {
            acc = acc.try_mul(&self.galois(k)).expect("same order");
        }
        debug_assert!(acc.is_rational());
        acc.coeffs[0].clone()
    }

    /// Multiplicative inverse via the product of the nontrivial conjugates.
    pub fn try_inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.is_rational() {
            return Self::from_rational_in(self.order, self.coeffs[0].recip());
        }
        let t = tables(self.order)?;
        let mut others = Self::from_rational_in(self.order, BigRational::one())?;
        for &k in t.units.iter().filter(|&&k| k != 1) {
            others = others.try_mul(&self.galois(k))?;
        }
        let norm = self.try_mul(&others)?;
        debug_assert!(norm.is_rational());
        Ok(others.scale(&norm.coeffs[0].recip()))
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(&other.try_inv()?)
    }

    /// Real part (z + z̄)/2.
    pub fn re(&self) -> Self {
        (self + &self.conj()).scale(&BigRational::new(1.into(), 2.into()))
    }

    /// Imaginary part (z − z̄)/(2i); requires i in the field.
    pub fn im(&self) -> Self {
        let d = self - &self.conj();
        if d.is_zero() {
            return d;
        }
        let two_i = Self::zeta_power_in(self.order, (self.order / 4) as i64)
            .expect("order divisible by 4")
            .scale(&BigRational::from_integer(2.into()));
        d.try_div(&two_i).expect("nonzero")
    }

    /// For elements of Q(i), the pair (re, im) of rationals.
    pub fn to_gaussian(&self) -> Option<(BigRational, BigRational)> {
        if !self.in_q_i() {
            return None;
        }
        Some((self.re().to_rational()?, self.im().to_rational()?))
    }

    /// Coordinates over Q, padded to φ(24) for the default field.
    pub fn rational_coords(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// True if the element is some root of unity ζₙ^k; returns k.
    pub fn as_root_of_unity(&self) -> Option<u32> {
        let t = tables(self.order).ok()?;
        (0..self.order).find(|&k| {
            let row = &t.reduce[k as usize];
            self.coeffs
                .iter()
                .zip(row)
                .all(|(c, &r)| *c == BigRational::from_integer(r.into()))
        })
    }
}

impl Default for CyclotomicElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for CyclotomicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CyclotomicElem> for &CyclotomicElem {
            type Output = CyclotomicElem;
            fn $m(self, rhs: &CyclotomicElem) -> CyclotomicElem {
                let f: fn(&CyclotomicElem, &CyclotomicElem) -> Result<CyclotomicElem, FieldError> =
                    $body;
                f(self, rhs).expect("cyclotomic orders must agree")
            }
        }
        impl $tr<CyclotomicElem> for CyclotomicElem {
            type Output = CyclotomicElem;
            fn $m(self, rhs: CyclotomicElem) -> CyclotomicElem {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.try_add(b));
binop!(Sub, sub, |a, b| a.try_add(&b.neg_ref()));
binop!(Mul, mul, |a, b| a.try_mul(b));

impl Neg for &CyclotomicElem {
    type Output = CyclotomicElem;
    fn neg(self) -> CyclotomicElem {
        self.neg_ref()
    }
}

impl Neg for CyclotomicElem {
    type Output = CyclotomicElem;
    fn neg(self) -> CyclotomicElem {
        self.neg_ref()
    }
}

impl From<BigRational> for CyclotomicElem {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    order: u32,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            order: self.order,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        CyclotomicElem::from_coeffs(w.order, coeffs).map_err(serde::de::Error::custom)
    }
}

/// Power-basis tables for Q(ζ₂₄), exposed for callers that want φ(24).
pub fn default_degree() -> usize {
    tables24().phi
}
