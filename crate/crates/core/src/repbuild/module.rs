use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RepError;
use crate::chevalley::{Basis, LieElement, StructureConstants};
use crate::exactfield::rational::int;
use crate::exactfield::CyclotomicElem;
use crate::linalg::{apply_rational, Matrix, SparseMatrix};
use crate::rootsys::{longest_element, to_simple_root_coords, weyl_dimension, RootSystem, Weight};

pub const DEFAULT_DIM_CAP: usize = 200;

/// The dimension cap in force: `QFORMA_DIM_CAP` when set to a positive
/// integer, otherwise [`DEFAULT_DIM_CAP`].
pub fn dim_cap() -> usize {
    std::env::var("QFORMA_DIM_CAP")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_DIM_CAP)
}

type SparseVec = Vec<(usize, BigRational)>;

/// One weight space. Basis vector `s` equals `F_i` applied to global basis
/// vector `g`, where `recipe[s] = (i, g)`; the highest weight space has an
/// empty recipe list and holds the formal highest-weight vector.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub weight: Vec<i64>,
    /// λ − μ in simple-root coordinates.
    pub depth: Vec<i64>,
    pub offset: usize,
    pub dim: usize,
    pub recipe: Vec<(usize, usize)>,
    /// Contravariant form restricted to this space, in the chosen basis.
    pub gram: Matrix<BigRational>,
}

impl WeightSpace {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim
    }
}

/// A finite-dimensional irreducible module with exact rational matrices for
/// the Chevalley generators and for every root vector.
#[derive(Clone, Debug)]
pub struct HighestWeightModule {
    sc: StructureConstants,
    highest: Vec<i64>,
    t: Tables,
    by_weight: HashMap<Vec<i64>, usize>,
    e: Vec<SparseMatrix<BigRational>>,
    f: Vec<SparseMatrix<BigRational>>,
    h: Vec<SparseMatrix<BigRational>>,
    root_ops: Vec<SparseMatrix<BigRational>>,
}

pub fn build_irrep(rs: &RootSystem, lambda: &Weight) -> Result<HighestWeightModule, RepError> {
    build_irrep_with_cap(rs, lambda, dim_cap())
}

pub fn build_irrep_with_cap(rs: &RootSystem, lambda: &Weight, cap: usize) -> Result<HighestWeightModule, RepError> {
    if lambda.coords.len() != rs.rank() {
        return Err(RepError::RootSys(crate::rootsys::RootSysError::DimensionMismatch {
            expected: rs.rank(),
            got: lambda.coords.len(),
        }));
    }
    let ints = lambda.to_ints().ok_or(RepError::NotDominant)?;
    if ints.iter().any(|&x| x < 0) {
        return Err(RepError::NotDominant);
    }
    let dim = weyl_dimension(rs, lambda)?;
    if dim > BigInt::from(cap) {
        return Err(RepError::DimensionCap { dim: dim.to_string(), cap });
    }
    let expected = dim.to_usize().expect("bounded by cap");
    let sc = StructureConstants::new(rs);
    let mut b = Builder::new(rs, &ints);
    b.run();
    if b.total != expected {
        return Err(RepError::Internal(format!("built dimension {} but Weyl dimension is {}", b.total, expected)));
    }
    Ok(b.finish(sc, ints))
}

/// Weight spaces plus the columns of every E_i and F_i, kept in the form
/// the recursive construction needs.
#[derive(Clone, Debug)]
struct Tables {
    spaces: Vec<WeightSpace>,
    by_depth: HashMap<Vec<i64>, usize>,
    space_of: Vec<usize>,
    ecol: Vec<Vec<SparseVec>>,
    fcol: Vec<Vec<SparseVec>>,
}

impl Tables {
    /// `E_i F_j e_g`, computed as `F_j E_i e_g + δ_ij ⟨weight(g), α_i∨⟩ e_g`.
    fn e_after_f(&self, i: usize, j: usize, g: usize) -> BTreeMap<usize, BigRational> {
        let mut acc = BTreeMap::new();
        for (r, x) in &self.ecol[i][g] {
            for (s, y) in &self.fcol[j][*r] {
                accumulate(&mut acc, *s, x * y);
            }
        }
        if i == j {
            let w = &self.spaces[self.space_of[g]].weight;
            accumulate(&mut acc, g, int(w[i]));
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }

    /// Candidate spanning vectors `F_i u` at depth `k` and their contravariant Gram matrix.
    fn candidate_gram(&self, k: &[i64]) -> (Vec<(usize, usize)>, Matrix<BigRational>) {
        let mut cands = vec![];
        for i in 0..k.len() {
            if k[i] == 0 {
                continue;
            }
            let mut p = k.to_vec();
            p[i] -= 1;
            if let Some(&sp) = self.by_depth.get(&p) {
                for g in self.spaces[sp].range() {
                    cands.push((i, g));
                }
            }
        }
        let m = cands.len();
        let mut gram = Matrix::zeros(m, m);
        for q in 0..m {
            let (j, gb) = cands[q];
            for p in 0..=q {
                let (i, ga) = cands[p];
                let v = self.e_after_f(i, j, gb);
                let sp = &self.spaces[self.space_of[ga]];
                let a = ga - sp.offset;
                let mut val = BigRational::zero();
                for (s, x) in &v {
                    val += &sp.gram[(a, s - sp.offset)] * x;
                }
                gram[(p, q)] = val.clone();
                gram[(q, p)] = val;
            }
        }
        (cands, gram)
    }
}

struct Builder<'a> {
    rs: &'a RootSystem,
    highest: Vec<i64>,
    t: Tables,
    total: usize,
}

fn accumulate(acc: &mut BTreeMap<usize, BigRational>, idx: usize, x: BigRational) {
    let e = acc.entry(idx).or_insert_with(BigRational::zero);
    *e += x;
}

impl<'a> Builder<'a> {
    fn new(rs: &'a RootSystem, highest: &[i64]) -> Self {
        let l = rs.rank();
        let top = WeightSpace {
            weight: highest.to_vec(),
            depth: vec![0; l],
            offset: 0,
            dim: 1,
            recipe: vec![],
            gram: Matrix::identity(1),
        };
        let mut by_depth = HashMap::new();
        by_depth.insert(vec![0; l], 0);
        Builder {
            rs,
            highest: highest.to_vec(),
            t: Tables {
                spaces: vec![top],
                by_depth,
                space_of: vec![0],
                ecol: vec![vec![vec![]]; l],
                fcol: vec![vec![vec![]]; l],
            },
            total: 1,
        }
    }

    fn weight_of_depth(&self, k: &[i64]) -> Vec<i64> {
        let c = self.rs.cartan_matrix();
        let l = self.rs.rank();
        (0..l)
            .map(|j| self.highest[j] - (0..l).map(|i| k[i] * c[i][j]).sum::<i64>())
            .collect()
    }

    fn run(&mut self) {
        let l = self.rs.rank();
        let mut level: Vec<usize> = vec![0];
        while !level.is_empty() {
            let mut next_depths = BTreeSet::new();
            for &sp in &level {
                for i in 0..l {
                    let mut k = self.t.spaces[sp].depth.clone();
                    k[i] += 1;
                    next_depths.insert(k);
                }
            }
            let mut next = vec![];
            for k in next_depths.into_iter().rev() {
                if let Some(sp) = self.add_space(&k) {
                    next.push(sp);
                }
            }
            level = next;
        }
    }

    fn add_space(&mut self, k: &[i64]) -> Option<usize> {
        let l = self.rs.rank();
        let (cands, gram) = self.t.candidate_gram(k);
        if cands.is_empty() {
            return None;
        }
        let (_, pivots) = gram.rref();
        if pivots.is_empty() {
            return None;
        }
        let r = pivots.len();
        let sub = Matrix::from_rows(
            pivots.iter().map(|&p| pivots.iter().map(|&q| gram[(p, q)].clone()).collect()).collect(),
        );
        let inv = sub.inverse().expect("pivot block of a Gram matrix is invertible");
        let offset = self.total;
        let weight = self.weight_of_depth(k);
        let recipe: Vec<(usize, usize)> = pivots.iter().map(|&p| cands[p]).collect();
        let sp = self.t.spaces.len();
        self.t.spaces.push(WeightSpace { weight, depth: k.to_vec(), offset, dim: r, recipe: recipe.clone(), gram: sub });
        self.t.by_depth.insert(k.to_vec(), sp);
        self.total += r;
        for i in 0..l {
            self.t.ecol[i].extend(std::iter::repeat_n(vec![], r));
            self.t.fcol[i].extend(std::iter::repeat_n(vec![], r));
        }
        self.t.space_of.extend(std::iter::repeat_n(sp, r));

        // F_i on each candidate: solve Gram x = (⟨pivot, candidate⟩)_pivot.
        for (p, &(i, g)) in cands.iter().enumerate() {
            let rhs: Vec<BigRational> = pivots.iter().map(|&q| gram[(q, p)].clone()).collect();
            let x = inv.mul_vec(&rhs);
            self.t.fcol[i][g] = x
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(s, v)| (offset + s, v))
                .collect();
        }

        for (s, &(j, g)) in recipe.iter().enumerate() {
            for m in 0..l {
                let v = self.t.e_after_f(m, j, g);
                self.t.ecol[m][offset + s] = v.into_iter().collect();
            }
        }
        Some(sp)
    }

    fn finish(self, sc: StructureConstants, highest: Vec<i64>) -> HighestWeightModule {
        let l = self.rs.rank();
        let n = self.total;
        let to_matrix = |cols: &Vec<SparseVec>| {
            let mut m = SparseMatrix::zeros(n, n);
            for (g, col) in cols.iter().enumerate() {
                for (r, x) in col {
                    m.add_to(*r, g, x);
                }
            }
            m
        };
        let e: Vec<_> = self.t.ecol.iter().map(to_matrix).collect();
        let f: Vec<_> = self.t.fcol.iter().map(to_matrix).collect();
        let h: Vec<_> = (0..l)
            .map(|i| {
                let mut m = SparseMatrix::zeros(n, n);
                for sp in &self.t.spaces {
                    for g in sp.range() {
                        if sp.weight[i] != 0 {
                            m.set(g, g, int(sp.weight[i]));
                        }
                    }
                }
                m
            })
            .collect();
        let root_ops = root_operators(&sc, &e, &f);
        let by_weight = self.t.spaces.iter().enumerate().map(|(i, s)| (s.weight.clone(), i)).collect();
        HighestWeightModule { sc, highest, t: self.t, by_weight, e, f, h, root_ops }
    }
}

/// ρ(x_{α_i}) = E_i, ρ(x_{−α_i}) = −F_i, and the remaining root vectors from
/// `[x_{α_i}, x_β] = N_{α_i,β} x_{α_i+β}` with the smallest usable i.
fn root_operators(
    sc: &StructureConstants,
    e: &[SparseMatrix<BigRational>],
    f: &[SparseMatrix<BigRational>],
) -> Vec<SparseMatrix<BigRational>> {
    let npos = sc.num_positive();
    let l = sc.rank();
    let n = e.first().map(|m| m.rows()).unwrap_or(1);
    let mut ops = vec![SparseMatrix::zeros(n, n); 2 * npos];
    for a in 0..npos {
        let root = &sc.roots()[a];
        if let Some(i) = sc.simple_index(a) {
            ops[a] = e[i].clone();
            ops[sc.neg(a)] = f[i].scale(&-BigRational::one());
            continue;
        }
        let (i, b) = (0..l)
            .find_map(|i| {
                let mut r = root.clone();
                r[i] -= 1;
                sc.root_index(&r).filter(|&b| sc.is_positive(b)).map(|b| (i, b))
            })
            .expect("every non-simple positive root has a simple predecessor");
        let nab = int(sc.n(i, b).expect("i + b is a root"));
        ops[a] = ops[i].commutator(&ops[b]).scale(&nab.recip());
        let nneg = int(sc.n(sc.neg(i), sc.neg(b)).expect("−i − b is a root"));
        ops[sc.neg(a)] = ops[sc.neg(i)].commutator(&ops[sc.neg(b)]).scale(&nneg.recip());
    }
    ops
}

impl HighestWeightModule {
    pub fn structure_constants(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn root_system(&self) -> &RootSystem {
        self.sc.root_system()
    }

    pub fn highest_weight(&self) -> Weight {
        Weight::from_ints(&self.highest)
    }

    pub fn dim(&self) -> usize {
        self.t.space_of.len()
    }

    pub fn spaces(&self) -> &[WeightSpace] {
        &self.t.spaces
    }

    pub fn space_of_vector(&self, g: usize) -> &WeightSpace {
        &self.t.spaces[self.t.space_of[g]]
    }

    pub fn space(&self, weight: &[i64]) -> Option<&WeightSpace> {
        self.by_weight.get(weight).map(|&i| &self.t.spaces[i])
    }

    pub fn space_at_depth(&self, depth: &[i64]) -> Option<&WeightSpace> {
        self.t.by_depth.get(depth).map(|&i| &self.t.spaces[i])
    }

    /// Weight multiplicities, keyed by fundamental-weight coordinates.
    pub fn multiplicities(&self) -> BTreeMap<Vec<i64>, usize> {
        self.t.spaces.iter().map(|s| (s.weight.clone(), s.dim)).collect()
    }

    /// Global index of the basis vector spanning the lowest weight space.
    pub fn lowest_index(&self) -> usize {
        let w0 = longest_element(self.root_system());
        let low = w0.apply_ints(&self.highest);
        self.space(&low).expect("lowest weight occurs").offset
    }

    pub fn e(&self, i: usize) -> &SparseMatrix<BigRational> {
        &self.e[i]
    }

    pub fn f(&self, i: usize) -> &SparseMatrix<BigRational> {
        &self.f[i]
    }

    pub fn h(&self, i: usize) -> &SparseMatrix<BigRational> {
        &self.h[i]
    }

    /// The matrix of a Chevalley basis vector.
    pub fn rho(&self, b: Basis) -> &SparseMatrix<BigRational> {
        match b {
            Basis::H(i) => &self.h[i],
            Basis::X(a) => &self.root_ops[a],
        }
    }

    /// Applies a Lie algebra element (cyclotomic coefficients) to a vector.
    pub fn act(&self, x: &LieElement, v: &[CyclotomicElem]) -> Vec<CyclotomicElem> {
        let mut out = vec![CyclotomicElem::zero(); self.dim()];
        for (b, c) in x.coeffs() {
            let w = apply_rational(self.rho(*b), v);
            for (o, wi) in out.iter_mut().zip(w) {
                if !wi.is_zero() {
                    *o = &*o + &(c * &wi);
                }
            }
        }
        out
    }

    /// Checks `[E_i, F_j] = δ_ij H_i`, `[H_i, E_j] = C_ji E_j`,
    /// `[H_i, F_j] = −C_ji F_j` and both families of Serre relations.
    pub fn check_relations(&self) -> Result<(), String> {
        let l = self.sc.rank();
        let c = self.root_system().cartan_matrix();
        let zero = SparseMatrix::zeros(self.dim(), self.dim());
        for i in 0..l {
            for j in 0..l {
                let want = if i == j { self.h[i].clone() } else { zero.clone() };
                if self.e[i].commutator(&self.f[j]) != want {
                    return Err(format!("[E{}, F{}]", i + 1, j + 1));
                }
                if self.h[i].commutator(&self.e[j]) != self.e[j].scale(&int(c[j][i])) {
                    return Err(format!("[H{}, E{}]", i + 1, j + 1));
                }
                if self.h[i].commutator(&self.f[j]) != self.f[j].scale(&int(-c[j][i])) {
                    return Err(format!("[H{}, F{}]", i + 1, j + 1));
                }
                if i == j {
                    continue;
                }
                let (mut se, mut sf) = (self.e[j].clone(), self.f[j].clone());
                for _ in 0..1 - c[j][i] {
                    se = self.e[i].commutator(&se);
                    sf = self.f[i].commutator(&sf);
                }
                if !se.is_zero() || !sf.is_zero() {
                    return Err(format!("Serre relation for ({}, {})", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// Checks `ρ([a, b]) = [ρ(a), ρ(b)]` on every pair of Chevalley basis vectors.
    pub fn check_homomorphism(&self) -> Result<usize, String> {
        let basis = self.sc.basis();
        let mut checked = 0;
        for (p, &a) in basis.iter().enumerate() {
            for &b in &basis[p + 1..] {
                let lhs = self.rho(a).commutator(self.rho(b));
                let mut rhs = SparseMatrix::zeros(self.dim(), self.dim());
                for (t, c) in self.sc.basis_bracket(a, b) {
                    rhs = rhs.add(&self.rho(t).scale(&int(c)));
                }
                if lhs != rhs {
                    return Err(format!("[{a:?}, {b:?}]"));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }

    /// Column `g` of `F_i` as sparse (row, value) pairs.
    pub(crate) fn f_column(&self, i: usize, g: usize) -> &[(usize, BigRational)] {
        &self.t.fcol[i][g]
    }
}

/// Gram matrix of the contravariant form on the vectors `F_i u`, where `u`
/// runs over the bases of the weight spaces directly above `mu`.
///
/// `mu` need not be a weight of the module: for a weight of the Verma module
/// that dies in the quotient the matrix is zero.
pub fn contravariant_gram(module: &HighestWeightModule, mu: &Weight) -> Result<Matrix<BigRational>, RepError> {
    let rs = module.root_system();
    let hw = module.highest_weight();
    if mu.coords.len() != rs.rank() {
        return Err(RepError::NotInSupport(mu.to_string()));
    }
    let diff = Weight { coords: hw.coords.iter().zip(&mu.coords).map(|(a, b)| a - b).collect() };
    let k = to_simple_root_coords(rs, &diff)?;
    if k.iter().any(|x| !x.is_integer() || x.is_negative()) {
        return Err(RepError::NotInSupport(mu.to_string()));
    }
    let k: Vec<i64> = k.iter().map(|x| x.to_integer().to_i64().expect("small")).collect();
    if k.iter().all(|&x| x == 0) {
        return Ok(Matrix::identity(1));
    }
    Ok(module.t.candidate_gram(&k).1)
}
