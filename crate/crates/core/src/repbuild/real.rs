use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::module::HighestWeightModule;
use super::RepError;
use crate::chevalley::{QFormKind, QFormSpec};
use crate::exactfield::rational::{int, rational_sqrt};
use crate::exactfield::{is_sum_of_two_rational_squares, two_squares_witness, CyclotomicElem};
use crate::linalg::{Matrix, SparseMatrix};
use crate::rootsys::{is_self_dual, to_simple_root_coords};

/// The invariant bilinear form pairing `V^μ` with `V^{−μ}`, normalized by
/// `B(v_λ, v_low) = 1`.
#[derive(Clone, Debug)]
pub struct InvariantForm {
    pub matrix: SparseMatrix<BigRational>,
    /// +1 when the form is symmetric, −1 when it is alternating.
    pub symmetry: i8,
}

impl InvariantForm {
    /// `Xᵀ B + B X = 0` for every Chevalley generator.
    pub fn is_invariant(&self, module: &HighestWeightModule) -> bool {
        let l = module.root_system().rank();
        (0..l).all(|i| {
            [module.e(i), module.f(i), module.h(i)]
                .iter()
                .all(|x| x.transpose().mul(&self.matrix).add(&self.matrix.mul(x)).is_zero())
        })
    }
}

pub fn invariant_bilinear_form(module: &HighestWeightModule) -> Result<InvariantForm, RepError> {
    let n = module.dim();
    let low = module.lowest_index();
    let hw = module.highest_weight().to_ints().expect("integral");
    let neg: Vec<i64> = hw.iter().map(|x| -x).collect();
    if module.space_of_vector(low).weight != neg {
        return Err(RepError::NotSelfDual);
    }
    let mut rows: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); n];
    rows[0].insert(low, BigRational::one());
    for sp in &module.spaces()[1..] {
        let minus: Vec<i64> = sp.weight.iter().map(|x| -x).collect();
        let dual = module.space(&minus).ok_or(RepError::NotSelfDual)?;
        for (s, &(j, g)) in sp.recipe.iter().enumerate() {
            // B(F_j u, v) = −B(u, F_j v)
            let mut row = BTreeMap::new();
            for t in dual.range() {
                let mut acc = BigRational::zero();
                for (r, x) in module.f_column(j, t) {
                    if let Some(b) = rows[g].get(r) {
                        acc += x * b;
                    }
                }
                if !acc.is_zero() {
                    row.insert(t, -acc);
                }
            }
            rows[sp.offset + s] = row;
        }
    }
    let mut matrix = SparseMatrix::zeros(n, n);
    for (a, row) in rows.iter().enumerate() {
        for (b, x) in row {
            matrix.set(a, *b, x.clone());
        }
    }
    let t = matrix.transpose();
    let symmetry = if t == matrix {
        1
    } else if t == matrix.scale(&-BigRational::one()) {
        -1
    } else {
        return Err(RepError::Internal("invariant form is neither symmetric nor alternating".into()));
    };
    Ok(InvariantForm { matrix, symmetry })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StructureKind {
    Real,
    Quaternionic,
}

/// A conjugate-linear map `v ↦ J·conj(v)` commuting with the compact real form.
#[derive(Clone, Debug)]
pub struct RealStructure {
    pub j: SparseMatrix<CyclotomicElem>,
    pub kind: StructureKind,
}

impl RealStructure {
    pub fn apply(&self, v: &[CyclotomicElem]) -> Vec<CyclotomicElem> {
        let c: Vec<CyclotomicElem> = v.iter().map(CyclotomicElem::conj).collect();
        self.j.mul_vec(&c)
    }

    /// The map `c·σ`.
    pub fn scaled(&self, c: &CyclotomicElem) -> RealStructure {
        RealStructure { j: self.j.scale(c), kind: self.kind }
    }

    /// The scalar `σ²`, or `None` when `σ²` is not scalar.
    pub fn square(&self) -> Option<CyclotomicElem> {
        let sq = self.j.mul(&self.j.map(CyclotomicElem::conj));
        let c = sq.get(0, 0);
        (sq == SparseMatrix::identity(sq.rows()).scale(&c)).then_some(c)
    }

    /// Whether `σ` commutes with every generator of the Q-form.
    pub fn commutes_with(&self, module: &HighestWeightModule, qf: &QFormSpec) -> bool {
        let n = module.dim();
        let gens = qf.q_basis(module.structure_constants());
        (0..n).all(|g| {
            let mut e = vec![CyclotomicElem::zero(); n];
            e[g] = CyclotomicElem::one();
            let se = self.apply(&e);
            gens.iter().all(|x| self.apply(&module.act(x, &e)) == module.act(x, &se))
        })
    }
}

/// σ with `B(σu, w) = S(ū, w)`, where `S` is the contravariant form (which is
/// the Hermitian form invariant under the compact real form), rescaled by an
/// element of Q(i) so that `σ² = ±1`.
pub fn real_structure_selfdual(module: &HighestWeightModule, qf: &QFormSpec) -> Result<RealStructure, RepError> {
    if qf.kind != QFormKind::StandardCompact {
        return Err(RepError::WrongForm("STANDARD_COMPACT".into()));
    }
    let rs = module.root_system();
    if !is_self_dual(rs, &module.highest_weight())? {
        return Err(RepError::NotSelfDual);
    }
    let b = invariant_bilinear_form(module)?;
    let n = module.dim();
    let mut j = SparseMatrix::<BigRational>::zeros(n, n);
    for sp in module.spaces() {
        let minus: Vec<i64> = sp.weight.iter().map(|x| -x).collect();
        let dual = module.space(&minus).ok_or(RepError::NotSelfDual)?;
        // rows: V^{−μ}, columns: V^μ
        let bm = Matrix::from_rows(
            dual.range().map(|p| sp.range().map(|q| b.matrix.get(p, q)).collect()).collect(),
        );
        let inv = bm
            .transpose()
            .inverse()
            .ok_or_else(|| RepError::Internal("invariant pairing is degenerate".into()))?;
        let jm = inv.mul(&sp.gram);
        for (p, gp) in dual.range().enumerate() {
            for (q, gq) in sp.range().enumerate() {
                if !jm[(p, q)].is_zero() {
                    j.set(gp, gq, jm[(p, q)].clone());
                }
            }
        }
    }
    let low = module.lowest_index();
    let c = j.get(0, low) * j.get(low, 0);
    let s = c.abs();
    let u = match rational_sqrt(&s) {
        Some(r) => CyclotomicElem::from_rational(r),
        None => {
            let (x, y) = two_squares_witness(&s, 10_000)
                .ok_or_else(|| RepError::Internal(format!("cannot normalize σ² = {c}")))?;
            CyclotomicElem::gaussian(x, y)
        }
    };
    let kind = if c.is_positive() { StructureKind::Real } else { StructureKind::Quaternionic };
    let sigma = RealStructure { j: j.map(|x| CyclotomicElem::from_rational(x.clone())).scale(&u.inv()), kind };
    let want = if kind == StructureKind::Real { CyclotomicElem::one() } else { CyclotomicElem::from_int(-1) };
    if sigma.square() != Some(want) {
        return Err(RepError::Internal("normalized σ² is not ±1".into()));
    }
    Ok(sigma)
}

fn ser_one_based<S: serde::Serializer>(t: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*t as u64 + 1)
}

/// Everything computed on the way to `(σ′)² = 3·k′·conj(k′)`.
#[derive(Clone, Debug, Serialize)]
pub struct TwistedCertificate {
    /// 0-based index of τ; serialized 1-based like every command-line index.
    #[serde(serialize_with = "ser_one_based")]
    pub tau: usize,
    pub a_tau: i64,
    /// `σ(v_λ) = r·v_low`.
    pub r: CyclotomicElem,
    pub k: CyclotomicElem,
    pub k_prime: CyclotomicElem,
    pub sigma_prime_squared: CyclotomicElem,
    pub three_k_prime_norm: CyclotomicElem,
    /// `σ′ = k·σ` maps the twisted Q(i)-lattice into itself.
    pub lattice_preserved: bool,
    pub k_prime_in_q_i: bool,
    /// `(σ′)²` is not a sum of two rational squares, so no rescaling of σ′ by
    /// Q(i) is an involution.
    pub obstructed: bool,
}

/// Coefficients `a_δ` of `2λ` in the simple roots.
pub fn doubled_root_coords(module: &HighestWeightModule) -> Result<Vec<i64>, RepError> {
    let rs = module.root_system();
    let c = to_simple_root_coords(rs, &module.highest_weight())?;
    c.iter()
        .map(|x| {
            let y = x * int(2);
            if y.is_integer() {
                Ok(y.to_integer().to_i64().expect("small"))
            } else {
                Err(RepError::Hypotheses("2λ is not in the root lattice, so λ is not self-dual".into()))
            }
        })
        .collect()
}

pub fn sigma_prime_twisted(
    module: &HighestWeightModule,
    sigma: &RealStructure,
    tau: Option<usize>,
) -> Result<TwistedCertificate, RepError> {
    let one = CyclotomicElem::one();
    if sigma.square() != Some(one) {
        return Err(RepError::Hypotheses("σ is not an involution".into()));
    }
    let a = doubled_root_coords(module)?;
    let tau = match tau {
        Some(t) if t >= a.len() => return Err(RepError::Hypotheses(format!("simple root {} does not exist", t + 1))),
        Some(t) if a[t] % 2 == 0 => {
            return Err(RepError::Hypotheses(format!("a_τ = {} is even for τ = α{}", a[t], t + 1)))
        }
        Some(t) => t,
        None => a.iter().position(|x| x % 2 != 0).ok_or(RepError::NoOddTau)?,
    };
    let low = module.lowest_index();
    let r = sigma.j.get(low, 0);
    let k = &CyclotomicElem::sqrt3_pow(a[tau]) * &r.inv();
    let k_prime = &k * &CyclotomicElem::sqrt3().inv();
    let sp = sigma.scaled(&k);

    let n = module.dim();
    let d: Vec<CyclotomicElem> =
        (0..n).map(|g| CyclotomicElem::sqrt3_pow(module.space_of_vector(g).depth[tau])).collect();
    let lattice_preserved = (0..n).all(|q| {
        sp.j.row_entries(q).iter().all(|(p, x)| (&(x * &d[*p]) * &d[q].inv()).in_q_i())
    });
    let sigma_prime_squared =
        sp.square().ok_or_else(|| RepError::Internal("(σ′)² is not scalar".into()))?;
    let three_k_prime_norm = (&k_prime * &k_prime.conj()).scale(&int(3));
    let value = sigma_prime_squared
        .to_rational()
        .ok_or_else(|| RepError::Internal("(σ′)² is not rational".into()))?;
    let obstructed = !is_sum_of_two_rational_squares(&value)?;
    Ok(TwistedCertificate {
        tau,
        a_tau: a[tau],
        r,
        k_prime_in_q_i: k_prime.in_q_i(),
        k,
        k_prime,
        sigma_prime_squared,
        three_k_prime_norm,
        lattice_preserved,
        obstructed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::standard_qform;
    use crate::repbuild::build_irrep;
    use crate::rootsys::{RootSystem, Weight};

    fn setup(label: &str, w: &[i64]) -> (HighestWeightModule, QFormSpec) {
        let rs = RootSystem::from_label(label).unwrap();
        let m = build_irrep(&rs, &Weight::from_ints(w)).unwrap();
        let qf = standard_qform(m.structure_constants());
        (m, qf)
    }

    #[test]
    fn frobenius_schur_signs() {
        for (label, w, sym) in [("A1", vec![2], 1), ("A1", vec![1], -1), ("A3", vec![0, 1, 0], 1), ("C2", vec![1, 0], -1), ("G2", vec![1, 0], 1)] {
            let (m, _) = setup(label, &w);
            let b = invariant_bilinear_form(&m).unwrap();
            assert_eq!(b.symmetry, sym, "{label} {w:?}");
            assert!(b.is_invariant(&m));
        }
    }

    #[test]
    fn sigma_real_and_quaternionic() {
        let (m, qf) = setup("A1", &[2]);
        let s = real_structure_selfdual(&m, &qf).unwrap();
        assert_eq!(s.kind, StructureKind::Real);
        assert_eq!(s.square(), Some(CyclotomicElem::one()));
        assert!(s.commutes_with(&m, &qf));

        let (m, qf) = setup("A1", &[1]);
        let s = real_structure_selfdual(&m, &qf).unwrap();
        assert_eq!(s.kind, StructureKind::Quaternionic);
        assert_eq!(s.square(), Some(CyclotomicElem::from_int(-1)));
        assert!(s.commutes_with(&m, &qf));

        let (m, qf) = setup("A3", &[0, 1, 0]);
        let s = real_structure_selfdual(&m, &qf).unwrap();
        assert_eq!(s.kind, StructureKind::Real);
        assert!(s.commutes_with(&m, &qf));
    }

    #[test]
    fn not_self_dual_refused() {
        let (m, qf) = setup("A2", &[1, 0]);
        assert_eq!(real_structure_selfdual(&m, &qf).unwrap_err(), RepError::NotSelfDual);
    }

    #[test]
    fn twisted_obstruction_a3() {
        let (m, qf) = setup("A3", &[0, 1, 0]);
        let s = real_structure_selfdual(&m, &qf).unwrap();
        let cert = sigma_prime_twisted(&m, &s, None).unwrap();
        assert_eq!(cert.tau, 0);
        assert!(cert.k_prime_in_q_i && cert.lattice_preserved && cert.obstructed);
        assert_eq!(cert.sigma_prime_squared, cert.three_k_prime_norm);
        assert_ne!(cert.sigma_prime_squared, CyclotomicElem::one());

        let phase = s.scaled(&CyclotomicElem::i());
        let again = sigma_prime_twisted(&m, &phase, Some(2)).unwrap();
        assert_ne!(again.k, cert.k);
        assert_eq!(again.sigma_prime_squared, cert.sigma_prime_squared);
        assert!(again.obstructed);

        assert!(matches!(sigma_prime_twisted(&m, &s, Some(1)), Err(RepError::Hypotheses(_))));
    }

    #[test]
    fn root_lattice_weight_has_no_odd_tau() {
        let (m, qf) = setup("A1", &[2]);
        let s = real_structure_selfdual(&m, &qf).unwrap();
        assert_eq!(sigma_prime_twisted(&m, &s, None).unwrap_err(), RepError::NoOddTau);
    }
}
