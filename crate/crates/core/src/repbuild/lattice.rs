use num_rational::BigRational;
use serde::Serialize;

use super::module::HighestWeightModule;
use super::real::RealStructure;
use super::RepError;
use crate::chevalley::{LieElement, QFormSpec};
use crate::exactfield::CyclotomicElem;
use crate::linalg::{apply_rational, EchelonBasis, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Coefficients {
    Rational,
    GaussianRational,
}

/// A finitely generated subgroup of the module, spanned over Q or Q(i) by
/// the listed vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalLattice {
    pub coefficients: Coefficients,
    pub vectors: Vec<Vec<CyclotomicElem>>,
}

fn flatten(v: &[CyclotomicElem]) -> Vec<BigRational> {
    v.iter().flat_map(|x| x.coeffs().iter().cloned()).collect()
}

fn times_i(v: &[CyclotomicElem]) -> Vec<CyclotomicElem> {
    let i = CyclotomicElem::i();
    v.iter().map(|x| x * &i).collect()
}

impl RationalLattice {
    pub fn new(coefficients: Coefficients, vectors: Vec<Vec<CyclotomicElem>>) -> Self {
        RationalLattice { coefficients, vectors }
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.vectors.first().map(Vec::len)
    }

    fn echelon(&self, n: usize) -> EchelonBasis<BigRational> {
        let width = n * CyclotomicElem::zero().coeffs().len();
        let mut ech = EchelonBasis::new(width);
        for v in &self.vectors {
            ech.insert(&flatten(v));
            if self.coefficients == Coefficients::GaussianRational {
                ech.insert(&flatten(&times_i(v)));
            }
        }
        ech
    }

    /// Dimension of the Q-span of the vectors.
    pub fn q_rank(&self) -> usize {
        let Some(n) = self.ambient_dim() else { return 0 };
        RationalLattice { coefficients: Coefficients::Rational, vectors: self.vectors.clone() }.echelon(n).rank()
    }

    /// Dimension of the span over the declared coefficient field.
    pub fn field_rank(&self) -> usize {
        let Some(n) = self.ambient_dim() else { return 0 };
        match self.coefficients {
            Coefficients::Rational => self.echelon(n).rank(),
            Coefficients::GaussianRational => self.echelon(n).rank() / 2,
        }
    }

    pub fn complex_rank(&self) -> usize {
        if self.vectors.is_empty() {
            return 0;
        }
        Matrix::from_rows(self.vectors.clone()).rank()
    }

    /// Dimension of the real span, computed from real and imaginary parts.
    pub fn real_rank(&self) -> usize {
        if self.vectors.is_empty() {
            return 0;
        }
        let rows = self
            .vectors
            .iter()
            .map(|v| v.iter().map(CyclotomicElem::re).chain(v.iter().map(CyclotomicElem::im)).collect())
            .collect();
        Matrix::from_rows(rows).rank()
    }

    /// Membership in the span over the declared coefficient field.
    pub fn contains(&self, v: &[CyclotomicElem]) -> bool {
        match self.ambient_dim() {
            None => v.iter().all(CyclotomicElem::is_zero),
            Some(n) => self.echelon(n).contains(&flatten(v)),
        }
    }

    /// The lattice with every coordinate in `range` multiplied by `c`.
    pub fn scale_coordinates(&self, range: std::ops::Range<usize>, c: &CyclotomicElem) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().enumerate().map(|(g, x)| if range.contains(&g) { x * c } else { x.clone() }).collect())
            .collect();
        RationalLattice { coefficients: self.coefficients, vectors }
    }
}

/// The span of the highest-weight vector.
pub fn lattice_from_seed(module: &HighestWeightModule, coefficients: Coefficients) -> RationalLattice {
    let mut v = vec![CyclotomicElem::zero(); module.dim()];
    v[0] = CyclotomicElem::one();
    RationalLattice::new(coefficients, vec![v])
}

/// The span of all `y_{j1} ⋯ y_{jk} u` with `u` in the seed, where
/// `y_j = s_j·ρ(x_{−α_j})` and `s_j` is the Q-form's scale on the simple root.
/// Built weight space by weight space, so the result is graded.
pub fn qform_generate(
    module: &HighestWeightModule,
    qf: &QFormSpec,
    seed: &RationalLattice,
) -> Result<RationalLattice, RepError> {
    let n = module.dim();
    if seed.vectors.iter().any(|v| v.len() != n || v[1..].iter().any(|x| !x.is_zero())) {
        return Err(RepError::NonInvariantSeed);
    }
    let sc = module.structure_constants();
    let l = sc.rank();
    let gaussian = seed.coefficients == Coefficients::GaussianRational;
    let width = CyclotomicElem::zero().coeffs().len();
    let spaces = module.spaces();
    let mut per_space: Vec<Vec<Vec<CyclotomicElem>>> = vec![vec![]; spaces.len()];

    let insert = |idx: usize, v: Vec<CyclotomicElem>, store: &mut Vec<Vec<CyclotomicElem>>, ech: &mut EchelonBasis<BigRational>| {
        let range = spaces[idx].range();
        let local = flatten(&v[range.clone()]);
        if ech.insert(&local) {
            if gaussian {
                ech.insert(&flatten(&times_i(&v)[range]));
            }
            store.push(v);
        }
    };

    let mut top = EchelonBasis::new(width);
    let mut top_store = vec![];
    for v in &seed.vectors {
        insert(0, v.clone(), &mut top_store, &mut top);
    }
    per_space[0] = top_store;

    let y: Vec<_> = (0..l).map(|j| (module.f(j), qf.scale[j].clone())).collect();
    for (idx, sp) in spaces.iter().enumerate().skip(1) {
        let mut ech = EchelonBasis::new(sp.dim * width);
        let mut store = vec![];
        for (j, (f, s)) in y.iter().enumerate() {
            if sp.depth[j] == 0 {
                continue;
            }
            let mut parent = sp.depth.clone();
            parent[j] -= 1;
            let Some(pidx) = spaces.iter().position(|t| t.depth == parent) else { continue };
            for b in per_space[pidx].clone() {
                let w: Vec<CyclotomicElem> = apply_rational(f, &b).iter().map(|x| -(x * s)).collect();
                insert(idx, w, &mut store, &mut ech);
            }
        }
        per_space[idx] = store;
    }
    Ok(RationalLattice::new(seed.coefficients, per_space.into_iter().flatten().collect()))
}

/// Q-span of `b + σ(b)` and `ib + σ(ib)` over a Q(i)-basis `b` of the lattice.
pub fn descend_to_q(lattice: &RationalLattice, sigma: &RealStructure) -> Result<RationalLattice, RepError> {
    if lattice.coefficients != Coefficients::GaussianRational {
        return Err(RepError::Hypotheses("descent starts from a Q(i)-lattice".into()));
    }
    if sigma.square() != Some(CyclotomicElem::one()) {
        return Err(RepError::Hypotheses("σ is not an involution".into()));
    }
    let Some(n) = lattice.ambient_dim() else {
        return Ok(RationalLattice::new(Coefficients::Rational, vec![]));
    };
    if !lattice.vectors.iter().all(|b| lattice.contains(&sigma.apply(b))) {
        return Err(RepError::NotPreserved);
    }
    let mut ech = EchelonBasis::new(n * CyclotomicElem::zero().coeffs().len());
    let mut out = vec![];
    for b in &lattice.vectors {
        for v in [b.clone(), times_i(b)] {
            let sv = sigma.apply(&v);
            let w: Vec<CyclotomicElem> = v.iter().zip(&sv).map(|(x, y)| x + y).collect();
            if ech.insert(&flatten(&w)) {
                out.push(w);
            }
        }
    }
    Ok(RationalLattice::new(Coefficients::Rational, out))
}

/// Exact checks that a lattice is a Q-form (or Q(i)-form) of the module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    /// Closed under every generator of the Q-form (of its Q(i)-span for Q(i)-lattices).
    pub invariant: bool,
    /// The vectors span the module over C.
    pub spans: bool,
    /// Rank over the coefficient field equals the real (or complex) rank and the dimension.
    pub independent: bool,
    pub field_rank: usize,
    pub real_rank: usize,
    pub complex_rank: usize,
}

impl LatticeReport {
    pub fn all(&self) -> bool {
        self.invariant && self.spans && self.independent
    }
}

pub fn verify_qform_of_module(module: &HighestWeightModule, qf: &QFormSpec, lattice: &RationalLattice) -> LatticeReport {
    let n = module.dim();
    let sc = module.structure_constants();
    let gens: Vec<LieElement> = match lattice.coefficients {
        Coefficients::Rational => qf.q_basis(sc),
        Coefficients::GaussianRational => qf.q_i_basis(sc),
    };
    let invariant = match lattice.ambient_dim() {
        None => true,
        Some(d) => {
            let ech = lattice.echelon(d);
            lattice.vectors.iter().all(|b| gens.iter().all(|x| ech.contains(&flatten(&module.act(x, b)))))
        }
    };
    let field_rank = lattice.field_rank();
    let real_rank = lattice.real_rank();
    let complex_rank = lattice.complex_rank();
    let spans = complex_rank == n;
    let independent = match lattice.coefficients {
        Coefficients::Rational => field_rank == real_rank && field_rank == n,
        Coefficients::GaussianRational => field_rank == complex_rank && field_rank == n,
    };
    LatticeReport { invariant, spans, independent, field_rank, real_rank, complex_rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{standard_qform, twisted_qform};
    use crate::repbuild::{build_irrep, real_structure_selfdual};
    use crate::rootsys::{RootSystem, Weight};

    fn module(label: &str, w: &[i64]) -> HighestWeightModule {
        build_irrep(&RootSystem::from_label(label).unwrap(), &Weight::from_ints(w)).unwrap()
    }

    #[test]
    fn ladder_generates_full_rank() {
        let m = module("A1", &[2]);
        let qf = standard_qform(m.structure_constants());
        let u = qform_generate(&m, &qf, &lattice_from_seed(&m, Coefficients::Rational)).unwrap();
        assert_eq!(u.q_rank(), 3);
    }

    #[test]
    fn trivial_module_keeps_seed() {
        let m = module("B2", &[0, 0]);
        let qf = standard_qform(m.structure_constants());
        let seed = lattice_from_seed(&m, Coefficients::Rational);
        assert_eq!(qform_generate(&m, &qf, &seed).unwrap(), seed);
    }

    #[test]
    fn seed_outside_top_space_is_refused() {
        let m = module("A1", &[2]);
        let qf = standard_qform(m.structure_constants());
        let bad = RationalLattice::new(Coefficients::Rational, vec![vec![CyclotomicElem::zero(), CyclotomicElem::one(), CyclotomicElem::zero()]]);
        assert_eq!(qform_generate(&m, &qf, &bad).unwrap_err(), RepError::NonInvariantSeed);
    }

    #[test]
    fn a3_standard_descends_to_q_form() {
        let m = module("A3", &[0, 1, 0]);
        let qf = standard_qform(m.structure_constants());
        let stage1 = qform_generate(&m, &qf, &lattice_from_seed(&m, Coefficients::GaussianRational)).unwrap();
        assert!(verify_qform_of_module(&m, &qf, &stage1).all());
        let sigma = real_structure_selfdual(&m, &qf).unwrap();
        let q = descend_to_q(&stage1, &sigma).unwrap();
        let report = verify_qform_of_module(&m, &qf, &q);
        assert!(report.all(), "{report:?}");
        assert_eq!(q.q_rank(), 6);
    }

    #[test]
    fn negative_checks() {
        let m = module("A3", &[0, 1, 0]);
        let qf = standard_qform(m.structure_constants());
        let stage1 = qform_generate(&m, &qf, &lattice_from_seed(&m, Coefficients::GaussianRational)).unwrap();
        let r = m.spaces()[1].range();
        let skewed = stage1.scale_coordinates(r, &CyclotomicElem::sqrt3());
        assert!(!verify_qform_of_module(&m, &qf, &skewed).invariant);
        let empty = RationalLattice::new(Coefficients::Rational, vec![]);
        assert!(!verify_qform_of_module(&m, &qf, &empty).spans);
    }

    #[test]
    fn twisted_stage_one_lattice_is_invariant() {
        let m = module("A3", &[0, 1, 0]);
        let qf = twisted_qform(m.structure_constants(), 0).unwrap();
        let stage1 = qform_generate(&m, &qf, &lattice_from_seed(&m, Coefficients::GaussianRational)).unwrap();
        assert!(verify_qform_of_module(&m, &qf, &stage1).all());
    }
}
