use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{ser_rational, weight_report, FsIndicator, RationalityError, WeightReport};
use crate::chevalley::{standard_qform, QFormKind, QFormSpec};
use crate::exactfield::{is_sum_of_two_rational_squares, two_squares_witness, CyclotomicElem};
use crate::repbuild::{
    build_irrep_with_cap, descend_to_q, dim_cap, doubled_root_coords, lattice_from_seed, qform_generate,
    real_structure_selfdual, sigma_prime_twisted, verify_qform_of_module, Coefficients, LatticeReport, RationalLattice,
    RepError, TwistedCertificate,
};
use crate::rootsys::{RootSystem, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    HasQForm,
    NoQForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessLattice {
    pub rank: usize,
    pub report: LatticeReport,
    pub basis: Vec<Vec<CyclotomicElem>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionCertificate {
    /// Square of the unique-up-to-Q(i) equivariant conjugation preserving the
    /// Q(i)-lattice generated from the highest-weight line.
    #[serde(serialize_with = "ser_rational")]
    pub sigma_prime_squared: BigRational,
    pub is_sum_of_two_rational_squares: bool,
    /// The twisted computation `(σ′)² = 3·k′·conj(k′)`, when τ has odd `a_τ`.
    pub twisted: Option<TwistedCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QFormVerdict {
    pub verdict: VerdictKind,
    #[serde(rename = "type")]
    pub type_label: String,
    pub weight: Vec<i64>,
    pub form: QFormKind,
    /// 1-based index of τ for the twisted form.
    pub tau: Option<usize>,
    pub dimension: usize,
    pub weight_report: WeightReport,
    pub witness: Option<WitnessLattice>,
    pub certificate: Option<ObstructionCertificate>,
}

pub fn has_q_form_verdict(rs: &RootSystem, lambda: &Weight, qf: &QFormSpec) -> Result<QFormVerdict, RationalityError> {
    has_q_form_verdict_with_cap(rs, lambda, qf, dim_cap())
}

/// Decides whether the real form of the irreducible module with highest
/// weight `lambda` has a Q-form invariant under `qf`.
///
/// Every invariant Q(i)-form is a scalar multiple of the lattice `L`
/// generated from the highest-weight line, so a Q-form exists exactly when
/// some `zσ` with `z ∈ C` is an involution preserving `L`. Those maps are the
/// Q(i)-multiples of `σ′ = kσ`, where `k` is fixed by sending the highest
/// lattice line onto the lowest one, and `(uσ′)² = N(u)·(σ′)²`.
pub fn has_q_form_verdict_with_cap(
    rs: &RootSystem,
    lambda: &Weight,
    qf: &QFormSpec,
    cap: usize,
) -> Result<QFormVerdict, RationalityError> {
    let report = weight_report(rs, lambda)?;
    match report.fs_indicator {
        FsIndicator::NotSelfDual => {
            return Err(RationalityError::Hypotheses("the module is not self-dual, so it has no real form".into()))
        }
        FsIndicator::Minus => {
            return Err(RationalityError::Hypotheses(
                "the coefficient sum is not an integer, so the module is quaternionic".into(),
            ))
        }
        FsIndicator::Plus => {}
    }
    let module = build_irrep_with_cap(rs, lambda, cap)?;
    let sc = module.structure_constants();
    if qf.exponents.len() != sc.roots().len() {
        return Err(RationalityError::Hypotheses("Q-form belongs to a different root system".into()));
    }
    let sigma = real_structure_selfdual(&module, &standard_qform(sc))?;
    let stage1 = qform_generate(&module, qf, &lattice_from_seed(&module, Coefficients::GaussianRational))?;
    if !verify_qform_of_module(&module, qf, &stage1).all() {
        return Err(RepError::Internal("generated Q(i)-lattice is not a Q(i)-form".into()).into());
    }

    let low = module.lowest_index();
    let lowest = stage1
        .vectors
        .iter()
        .find(|v| !v[low].is_zero())
        .ok_or_else(|| RepError::Internal("lattice misses the lowest weight".into()))?;
    let r = sigma.j.get(low, 0);
    let k = &lowest[low] * &r.inv();
    let sigma_prime = sigma.scaled(&k);
    if !stage1.vectors.iter().all(|b| stage1.contains(&sigma_prime.apply(b))) {
        return Err(RepError::NotPreserved.into());
    }
    let square = sigma_prime
        .square()
        .and_then(|c| c.to_rational())
        .ok_or_else(|| RepError::Internal("(σ′)² is not a rational scalar".into()))?;
    let norm = is_sum_of_two_rational_squares(&square)?;

    let tau = qf.twist_root.map(|t| t + 1);
    let base = |verdict, witness, certificate| QFormVerdict {
        verdict,
        type_label: rs.label(),
        weight: lambda.to_ints().expect("integral"),
        form: qf.kind,
        tau,
        dimension: module.dim(),
        weight_report: report.clone(),
        witness,
        certificate,
    };

    if !norm {
        let twisted = match qf.twist_root {
            Some(t) if doubled_root_coords(&module)?[t] % 2 != 0 => Some(sigma_prime_twisted(&module, &sigma, Some(t))?),
            _ => None,
        };
        let cert = ObstructionCertificate { sigma_prime_squared: square, is_sum_of_two_rational_squares: false, twisted };
        return Ok(base(VerdictKind::NoQForm, None, Some(cert)));
    }

    let u = if square.is_one() {
        CyclotomicElem::one()
    } else {
        let (x, y) = two_squares_witness(&square, 10_000_000_000)
            .ok_or_else(|| RationalityError::Unsupported(format!("no explicit two-squares witness for {square}")))?;
        CyclotomicElem::gaussian(x, y)
    };
    let involution = sigma_prime.scaled(&u.inv());
    let q_lattice = descend_to_q(&stage1, &involution)?;
    let check = verify_qform_of_module(&module, qf, &q_lattice);
    if !check.all() {
        return Err(RepError::Internal(format!("descended lattice fails verification: {check:?}")).into());
    }
    let witness = WitnessLattice { rank: q_lattice.q_rank(), report: check, basis: q_lattice.vectors };
    Ok(base(VerdictKind::HasQForm, Some(witness), None))
}

impl QFormVerdict {
    pub fn witness_lattice(&self) -> Option<RationalLattice> {
        self.witness.as_ref().map(|w| RationalLattice::new(Coefficients::Rational, w.basis.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{twisted_qform, StructureConstants};

    fn run(label: &str, w: &[i64], tau: Option<usize>) -> QFormVerdict {
        let rs = RootSystem::from_label(label).unwrap();
        let sc = StructureConstants::new(&rs);
        let qf = match tau {
            None => standard_qform(&sc),
            Some(t) => twisted_qform(&sc, t).unwrap(),
        };
        has_q_form_verdict(&rs, &Weight::from_ints(w), &qf).unwrap()
    }

    #[test]
    fn standard_a3_has_q_form() {
        let v = run("A3", &[0, 1, 0], None);
        assert_eq!(v.verdict, VerdictKind::HasQForm);
        let w = v.witness.unwrap();
        assert_eq!(w.rank, 6);
        assert!(w.report.all());
    }

    #[test]
    fn twisted_a3_odd_tau_has_none() {
        for tau in [0, 2] {
            let v = run("A3", &[0, 1, 0], Some(tau));
            assert_eq!(v.verdict, VerdictKind::NoQForm);
            let c = v.certificate.unwrap();
            let t = c.twisted.unwrap();
            assert!(t.obstructed && t.k_prime_in_q_i);
            assert_eq!(t.sigma_prime_squared, t.three_k_prime_norm);
        }
    }

    #[test]
    fn twisted_a3_even_tau_still_has_q_form() {
        let v = run("A3", &[0, 1, 0], Some(1));
        assert_eq!(v.verdict, VerdictKind::HasQForm);
        assert!(v.witness.unwrap().report.all());
    }

    #[test]
    fn trivial_weight() {
        let v = run("B3", &[0, 0, 0], Some(2));
        assert_eq!(v.verdict, VerdictKind::HasQForm);
        assert_eq!(v.dimension, 1);
    }

    #[test]
    fn quaternionic_refused() {
        let rs = RootSystem::from_label("A1").unwrap();
        let qf = standard_qform(&StructureConstants::new(&rs));
        assert!(matches!(has_q_form_verdict(&rs, &Weight::from_ints(&[1]), &qf), Err(RationalityError::Hypotheses(_))));
    }
}
