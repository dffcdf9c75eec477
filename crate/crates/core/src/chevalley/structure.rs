//! Chevalley basis structure constants.
//!
//! Signs are produced by the extraspecial-pair algorithm in the convention
//! `[e_r, e_{-r}] = h_r`, `N_{-r,-s} = -N_{r,s}`, then converted by
//! `x_γ = ε_γ e_γ` (ε = +1 on positive roots, −1 on negative roots) to the
//! convention used everywhere else in the crate:
//!
//! * `[x_α, x_β] = N_{α,β} x_{α+β}` when α+β is a root,
//! * `[x_α, x_{−α}] = −h*_α` with h*_α the coroot,
//! * `N_{α,β} = N_{−α,−β} = ±(p_{α,β}+1)`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ChevalleyError;
use crate::exactfield::rational::int;
use crate::exactfield::CyclotomicElem;
use crate::linalg::SparseMatrix;
use crate::rootsys::RootSystem;

/// A Chevalley basis vector: `H(i)` is the simple coroot h_{α_i}, `X(a)` the
/// root vector of the root with index `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Basis {
    H(usize),
    X(usize),
}

#[derive(Clone, Debug)]
pub struct StructureConstants {
    rs: RootSystem,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    npos: usize,
    n_table: HashMap<(usize, usize), i64>,
    p_table: HashMap<(usize, usize), i64>,
    coroots: Vec<Vec<i64>>,
}

struct Carter<'a> {
    rs: &'a RootSystem,
    roots: &'a [Vec<i64>],
    index: &'a HashMap<Vec<i64>, usize>,
    npos: usize,
    memo: HashMap<(usize, usize), i64>,
}

impl Carter<'_> {
    fn is_pos(&self, a: usize) -> bool {
        a < self.npos
    }

    fn neg(&self, a: usize) -> usize {
        if a < self.npos {
            a + self.npos
        } else {
            a - self.npos
        }
    }

    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let v: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.index.get(&v).copied()
    }

    fn len2(&self, a: usize) -> i64 {
        self.rs.inner(&self.roots[a], &self.roots[a])
    }

    /// Largest p with roots[s] − p·roots[r] a root.
    fn string_below(&self, s: usize, r: usize) -> i64 {
        let mut p = 0;
        let mut v = self.roots[s].clone();
        loop {
            for (x, y) in v.iter_mut().zip(&self.roots[r]) {
                *x -= y;
            }
            if self.index.contains_key(&v) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    /// N_{x,y} when x+y is a root; 0 otherwise.
    fn n_or_zero(&mut self, x: usize, y: usize) -> i64 {
        if self.sum(x, y).is_some() {
            self.n(x, y)
        } else {
            0
        }
    }

    fn n(&mut self, x: usize, y: usize) -> i64 {
        let t = self.neg(self.sum(x, y).expect("x+y must be a root"));
        match (self.is_pos(x), self.is_pos(y)) {
            (true, true) => {
                if x < y {
                    self.positive_pair(x, y)
                } else {
                    -self.positive_pair(y, x)
                }
            }
            (false, false) => {
                let (nx, ny) = (self.neg(x), self.neg(y));
                -self.n(nx, ny)
            }
            _ => {
                // N_{x,y}/(t,t) = N_{y,t}/(x,x) = N_{t,x}/(y,y)
                let (num, den, m) = if self.is_pos(t) == self.is_pos(y) {
                    (self.len2(t), self.len2(x), self.n(y, t))
                } else {
                    (self.len2(t), self.len2(y), self.n(t, x))
                };
                assert_eq!((num * m) % den, 0, "non-integral structure constant");
                num * m / den
            }
        }
    }

    fn positive_pair(&mut self, r: usize, s: usize) -> i64 {
        if let Some(&v) = self.memo.get(&(r, s)) {
            return v;
        }
        let xi = self.sum(r, s).expect("special pair");
        let (r0, s0) = (0..self.npos)
            .find_map(|a| {
                let v: Vec<i64> = self.roots[xi].iter().zip(&self.roots[a]).map(|(x, y)| x - y).collect();
                match self.index.get(&v) {
                    Some(&b) if b < self.npos && a < b => Some((a, b)),
                    _ => None,
                }
            })
            .expect("every non-simple positive root has an extraspecial pair");
        let value = if (r, s) == (r0, s0) {
            self.string_below(s0, r0) + 1
        } else {
            let (nr0, ns0) = (self.neg(r0), self.neg(s0));
            let n_neg = self.n(nr0, ns0);
            let mut acc = BigRational::zero();
            if let Some(d) = self.sum(s, nr0) {
                let v = self.n(s, nr0) * self.n_or_zero(r, ns0);
                acc += BigRational::new(v.into(), self.len2(d).into());
            }
            if let Some(d) = self.sum(r, nr0) {
                let v = self.n(nr0, r) * self.n_or_zero(s, ns0);
                acc += BigRational::new(v.into(), self.len2(d).into());
            }
            let val = -acc * int(self.len2(xi)) / int(n_neg);
            assert!(val.is_integer(), "four-term relation gave a non-integer");
            i64::try_from(val.to_integer()).expect("small")
        };
        self.memo.insert((r, s), value);
        value
    }
}

/// Builds the Chevalley basis structure constants of a root system.
pub fn chevalley_basis(rs: &RootSystem) -> StructureConstants {
    StructureConstants::new(rs)
}

impl StructureConstants {
    pub fn new(rs: &RootSystem) -> Self {
        let npos = rs.positive_roots().len();
        let mut roots: Vec<Vec<i64>> = rs.positive_roots().to_vec();
        roots.extend(rs.positive_roots().iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let index: HashMap<Vec<i64>, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut carter = Carter { rs, roots: &roots, index: &index, npos, memo: HashMap::new() };
        let eps = |a: usize| if a < npos { 1 } else { -1 };
        let mut n_table = HashMap::new();
        let mut p_table = HashMap::new();
        for a in 0..roots.len() {
            for b in 0..roots.len() {
                let Some(c) = carter.sum(a, b) else { continue };
                let n = eps(a) * eps(b) * eps(c) * carter.n(a, b);
                n_table.insert((a, b), n);
                p_table.insert((a, b), carter.string_below(a, b));
            }
        }
        let coroots = roots
            .iter()
            .map(|r| {
                let l = rs.inner(r, r);
                (0..rs.rank())
                    .map(|i| {
                        let v = r[i] * rs.simple_form()[i][i];
                        debug_assert_eq!(v % l, 0);
                        v / l
                    })
                    .collect()
            })
            .collect();
        StructureConstants { rs: rs.clone(), roots, index, npos, n_table, p_table, coroots }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    /// All roots: positive roots in canonical order, then their negatives.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.rank() + self.roots.len()
    }

    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn neg(&self, a: usize) -> usize {
        if a < self.npos {
            a + self.npos
        } else {
            a - self.npos
        }
    }

    pub fn is_positive(&self, a: usize) -> bool {
        a < self.npos
    }

    pub fn root_sum(&self, a: usize, b: usize) -> Option<usize> {
        let v: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.root_index(&v)
    }

    /// N_{α,β} for root indices with α+β a root.
    pub fn n(&self, a: usize, b: usize) -> Option<i64> {
        self.n_table.get(&(a, b)).copied()
    }

    pub fn p(&self, a: usize, b: usize) -> Option<i64> {
        self.p_table.get(&(a, b)).copied()
    }

    /// All stored (α, β, N) triples, sorted by indices.
    pub fn n_entries(&self) -> Vec<(usize, usize, i64)> {
        let mut v: Vec<_> = self.n_table.iter().map(|(&(a, b), &n)| (a, b, n)).collect();
        v.sort_unstable();
        v
    }

    /// h*_α in the basis of simple coroots.
    pub fn coroot(&self, a: usize) -> &[i64] {
        &self.coroots[a]
    }

    /// The simple root index i with α_i = roots[a], if any.
    pub fn simple_index(&self, a: usize) -> Option<usize> {
        (a < self.rank()).then_some(a)
    }

    /// Position of a basis vector in the ordering `h_1..h_ℓ, x_0..x_{2N-1}`.
    pub fn basis_index(&self, b: Basis) -> usize {
        match b {
            Basis::H(i) => i,
            Basis::X(a) => self.rank() + a,
        }
    }

    pub fn basis_at(&self, k: usize) -> Basis {
        if k < self.rank() {
            Basis::H(k)
        } else {
            Basis::X(k - self.rank())
        }
    }

    pub fn basis(&self) -> Vec<Basis> {
        (0..self.dim()).map(|k| self.basis_at(k)).collect()
    }

    /// Bracket of two basis vectors with integer coefficients.
    pub fn basis_bracket(&self, x: Basis, y: Basis) -> Vec<(Basis, i64)> {
        match (x, y) {
            (Basis::H(_), Basis::H(_)) => vec![],
            (Basis::H(i), Basis::X(a)) => {
                let c = self.rs.pairing(&self.roots[a], i);
                if c == 0 {
                    vec![]
                } else {
                    vec![(Basis::X(a), c)]
                }
            }
            (Basis::X(_), Basis::H(_)) => {
                self.basis_bracket(y, x).into_iter().map(|(b, c)| (b, -c)).collect()
            }
            (Basis::X(a), Basis::X(b)) => {
                if b == self.neg(a) {
                    self.coroots[a]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (Basis::H(i), -c))
                        .collect()
                } else if let Some(n) = self.n(a, b) {
                    let s = self.root_sum(a, b).expect("stored pair");
                    vec![(Basis::X(s), n)]
                } else {
                    vec![]
                }
            }
        }
    }

    fn bracket_int(&self, u: &BTreeMap<Basis, i64>, v: &BTreeMap<Basis, i64>) -> BTreeMap<Basis, i64> {
        let mut out: BTreeMap<Basis, i64> = BTreeMap::new();
        for (&x, &cx) in u {
            for (&y, &cy) in v {
                for (z, c) in self.basis_bracket(x, y) {
                    *out.entry(z).or_insert(0) += cx * cy * c;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Checks the Jacobi identity on one triple of basis vectors.
    pub fn jacobi_holds(&self, a: Basis, b: Basis, c: Basis) -> bool {
        let one = |x: Basis| BTreeMap::from([(x, 1i64)]);
        let (ea, eb, ec) = (one(a), one(b), one(c));
        let t1 = self.bracket_int(&ea, &self.bracket_int(&eb, &ec));
        let t2 = self.bracket_int(&eb, &self.bracket_int(&ec, &ea));
        let t3 = self.bracket_int(&ec, &self.bracket_int(&ea, &eb));
        let mut sum = t1;
        for (k, v) in t2.into_iter().chain(t3) {
            *sum.entry(k).or_insert(0) += v;
        }
        sum.values().all(|&v| v == 0)
    }

    /// Jacobi identity on every triple of distinct basis vectors; returns the
    /// number of triples checked, or the first failing triple.
    pub fn jacobi_exhaustive(&self) -> Result<usize, ChevalleyError> {
        let basis = self.basis();
        let mut count = 0;
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                for k in j + 1..basis.len() {
                    if !self.jacobi_holds(basis[i], basis[j], basis[k]) {
                        return Err(ChevalleyError::JacobiFailure(format!(
                            "{:?} {:?} {:?}",
                            basis[i], basis[j], basis[k]
                        )));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Jacobi identity on `samples` random triples drawn with a seeded RNG.
    pub fn jacobi_sampled(&self, samples: usize, seed: u64) -> Result<usize, ChevalleyError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.dim();
        for _ in 0..samples {
            let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            let (a, b, c) = (self.basis_at(i), self.basis_at(j), self.basis_at(k));
            if !self.jacobi_holds(a, b, c) {
                return Err(ChevalleyError::JacobiFailure(format!("{a:?} {b:?} {c:?}")));
            }
        }
        Ok(samples)
    }

    /// Checks |N| = p+1, N_{α,β} = N_{−α,−β} and antisymmetry on every pair.
    pub fn n_pattern_holds(&self) -> Result<usize, ChevalleyError> {
        for (&(a, b), &n) in &self.n_table {
            let p = self.p_table[&(a, b)];
            let fail = |what: &str| ChevalleyError::NPatternFailure(format!("{what} at ({a}, {b})"));
            if n.abs() != p + 1 {
                return Err(fail("|N| != p+1"));
            }
            if self.n(self.neg(a), self.neg(b)) != Some(n) {
                return Err(fail("N(-a,-b) != N(a,b)"));
            }
            if self.n(b, a) != Some(-n) {
                return Err(fail("antisymmetry"));
            }
        }
        Ok(self.n_table.len())
    }

    /// Matrix of ad(b) in the ordered basis, as exact rationals.
    pub fn adjoint(&self, b: Basis) -> SparseMatrix<BigRational> {
        let d = self.dim();
        let mut m = SparseMatrix::zeros(d, d);
        for k in 0..d {
            for (z, c) in self.basis_bracket(b, self.basis_at(k)) {
                m.add_to(self.basis_index(z), k, &int(c));
            }
        }
        m
    }

    /// Tab-separated export: one `alpha beta N` row per stored pair.
    pub fn export_tsv(&self) -> String {
        let mut s = String::from("alpha\tbeta\tN\n");
        for (a, b, n) in self.n_entries() {
            s.push_str(&format!("{a}\t{b}\t{n}\n"));
        }
        s
    }
}

/// An element of the complexified Lie algebra, with coefficients in Q(ζ₂₄).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LieElement {
    coeffs: BTreeMap<Basis, CyclotomicElem>,
    shape: (usize, usize),
}

impl LieElement {
    pub fn zero(sc: &StructureConstants) -> Self {
        LieElement { coeffs: BTreeMap::new(), shape: (sc.rank(), sc.roots().len()) }
    }

    pub fn basis(sc: &StructureConstants, b: Basis) -> Self {
        Self::zero(sc).plus_term(b, CyclotomicElem::one())
    }

    /// Adds `c·b` in place and returns the element.
    pub fn plus_term(mut self, b: Basis, c: CyclotomicElem) -> Self {
        let new = match self.coeffs.remove(&b) {
            Some(old) => &old + &c,
            None => c,
        };
        if !new.is_zero() {
            self.coeffs.insert(b, new);
        }
        self
    }

    pub fn coeffs(&self) -> &BTreeMap<Basis, CyclotomicElem> {
        &self.coeffs
    }

    pub fn coeff(&self, b: Basis) -> CyclotomicElem {
        self.coeffs.get(&b).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (b, c) in &o.coeffs {
            r = r.plus_term(*b, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&CyclotomicElem::from_int(-1)))
    }

    pub fn scale(&self, s: &CyclotomicElem) -> Self {
        let mut r = LieElement { coeffs: BTreeMap::new(), shape: self.shape };
        for (b, c) in &self.coeffs {
            r = r.plus_term(*b, c * s);
        }
        r
    }

    /// Coefficient vector in the ordered basis of `sc`.
    pub fn to_vec(&self, sc: &StructureConstants) -> Vec<CyclotomicElem> {
        let mut v = vec![CyclotomicElem::zero(); sc.dim()];
        for (b, c) in &self.coeffs {
            v[sc.basis_index(*b)] = c.clone();
        }
        v
    }

    pub fn from_vec(sc: &StructureConstants, v: &[CyclotomicElem]) -> Self {
        let mut r = Self::zero(sc);
        for (k, c) in v.iter().enumerate() {
            r = r.plus_term(sc.basis_at(k), c.clone());
        }
        r
    }

    /// Flattens to rational coordinates (φ(24) per basis vector).
    pub fn rational_coords(&self, sc: &StructureConstants) -> Vec<BigRational> {
        self.to_vec(sc).iter().flat_map(|c| c.coeffs().to_vec()).collect()
    }
}

/// The Lie bracket, extended bilinearly from the basis table.
pub fn bracket(
    sc: &StructureConstants,
    x: &LieElement,
    y: &LieElement,
) -> Result<LieElement, ChevalleyError> {
    let shape = (sc.rank(), sc.roots().len());
    if x.shape != shape || y.shape != shape {
        return Err(ChevalleyError::MismatchedRootSystems);
    }
    let mut out = LieElement::zero(sc);
    for (bx, cx) in &x.coeffs {
        for (by, cy) in &y.coeffs {
            let c = cx * cy;
            for (z, n) in sc.basis_bracket(*bx, *by) {
                out = out.plus_term(z, c.scale(&int(n)));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;

    fn sc(s: &str) -> StructureConstants {
        chevalley_basis(&RootSystem::from_label(s).unwrap())
    }

    #[test]
    fn a2_constants() {
        let c = sc("A2");
        assert_eq!(c.n(0, 1).map(i64::abs), Some(1));
        assert_eq!(c.n(0, 1), Some(1));
        assert_eq!(c.n(1, 0), Some(-1));
    }

    #[test]
    fn g2_reaches_three() {
        let c = sc("G2");
        assert!(c.n_entries().iter().any(|e| e.2.abs() == 3));
        assert_eq!(c.n_entries().iter().map(|e| e.2.abs()).max(), Some(3));
    }

    #[test]
    fn small_types_are_consistent() {
        for t in ["A1", "A2", "A3", "B2", "C3", "G2", "B3"] {
            let c = sc(t);
            c.jacobi_exhaustive().unwrap();
            c.n_pattern_holds().unwrap();
        }
    }

    #[test]
    fn sampled_jacobi_e6() {
        let c = sc("E6");
        c.n_pattern_holds().unwrap();
        c.jacobi_sampled(3000, 7).unwrap();
    }

    #[test]
    fn basic_brackets() {
        let c = sc("B2");
        let x = LieElement::basis(&c, Basis::X(0));
        let y = LieElement::basis(&c, Basis::X(c.neg(0)));
        let h = bracket(&c, &x, &y).unwrap();
        // [x_α, x_{−α}] = −h*_α and α_1 is simple, so h* = h_1
        assert_eq!(h, LieElement::basis(&c, Basis::H(0)).scale(&CyclotomicElem::from_int(-1)));
        assert!(bracket(&c, &x, &x).unwrap().is_zero());
        let h0 = LieElement::basis(&c, Basis::H(0));
        let h1 = LieElement::basis(&c, Basis::H(1));
        assert!(bracket(&c, &h0, &h1).unwrap().is_zero());
        // α_1 + α_1 is not a root
        let other = sc("A1");
        let z = LieElement::basis(&other, Basis::X(0));
        assert!(matches!(bracket(&c, &x, &z), Err(ChevalleyError::MismatchedRootSystems)));
    }

    #[test]
    fn non_root_sums_bracket_to_zero() {
        let c = sc("A3");
        // α_1 and α_3 are orthogonal
        assert!(c.basis_bracket(Basis::X(0), Basis::X(2)).is_empty());
    }

    #[test]
    fn adjoint_is_a_representation() {
        let c = sc("G2");
        let basis = c.basis();
        for &a in &basis {
            for &b in &basis {
                let lhs = c.adjoint(a).commutator(&c.adjoint(b));
                let mut rhs = SparseMatrix::zeros(c.dim(), c.dim());
                for (z, n) in c.basis_bracket(a, b) {
                    rhs = rhs.add(&c.adjoint(z).scale(&int(n)));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn tsv_export_has_one_row_per_pair() {
        let c = sc("A2");
        let t = c.export_tsv();
        assert_eq!(t.lines().count(), 1 + c.n_entries().len());
        assert!(t.starts_with("alpha\tbeta\tN\n"));
    }
}
