//! Decision procedures: weight criteria, commutants of rational
//! representations, and whether a real representation has a Q-form.

mod commutant;
mod verdict;

pub use commutant::{
    commutant, commutant_with_seed, r_irreducibility_verdict, real_splitting_witness, restriction_of_scalars,
    CommutantClass, CommutantKind, CommutantOutcome, RVerdict, ReducibilityWitness,
};
pub use verdict::{has_q_form_verdict, has_q_form_verdict_with_cap, ObstructionCertificate, QFormVerdict, VerdictKind, WitnessLattice};

use num_rational::BigRational;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::chevalley::ChevalleyError;
use crate::exactfield::rational::format_rational_short;
use crate::exactfield::FieldError;
use crate::repbuild::RepError;
use crate::rootsys::{coefficient_sum, in_root_lattice, is_self_dual, RootSysError, RootSystem, Weight};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RationalityError {
    #[error("hypotheses fail: {0}")]
    Hypotheses(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
}

/// Frobenius–Schur indicator read off from weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FsIndicator {
    Plus,
    Minus,
    NotSelfDual,
}

impl FsIndicator {
    pub fn label(self) -> &'static str {
        match self {
            FsIndicator::Plus => "+1",
            FsIndicator::Minus => "-1",
            FsIndicator::NotSelfDual => "NOT_SELF_DUAL",
        }
    }
}

impl Serialize for FsIndicator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

pub(crate) fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational_short(q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub self_dual: bool,
    #[serde(serialize_with = "ser_rational")]
    pub coefficient_sum: BigRational,
    pub sum_is_integer: bool,
    pub in_root_lattice: bool,
    pub fs_indicator: FsIndicator,
}

impl WeightReport {
    /// Self-dual, integral coefficient sum, outside the root lattice.
    pub fn is_obstruction_candidate(&self) -> bool {
        self.self_dual && self.sum_is_integer && !self.in_root_lattice
    }
}

pub fn weight_report(rs: &RootSystem, lambda: &Weight) -> Result<WeightReport, RationalityError> {
    if !lambda.is_dominant() {
        return Err(RootSysError::NotDominant.into());
    }
    let self_dual = is_self_dual(rs, lambda)?;
    let s = coefficient_sum(rs, lambda)?;
    let sum_is_integer = s.is_integer();
    let fs_indicator = match (self_dual, sum_is_integer) {
        (false, _) => FsIndicator::NotSelfDual,
        (true, true) => FsIndicator::Plus,
        (true, false) => FsIndicator::Minus,
    };
    Ok(WeightReport {
        self_dual,
        coefficient_sum: s,
        sum_is_integer,
        in_root_lattice: in_root_lattice(rs, lambda)?,
        fs_indicator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, rat};
    use crate::repbuild::{build_irrep, invariant_bilinear_form};

    #[test]
    fn reports() {
        let a3 = RootSystem::from_label("A3").unwrap();
        let r = weight_report(&a3, &Weight::from_ints(&[0, 1, 0])).unwrap();
        assert!(r.self_dual && r.sum_is_integer && !r.in_root_lattice);
        assert_eq!(r.coefficient_sum, int(2));
        assert_eq!(r.fs_indicator, FsIndicator::Plus);

        let a1 = RootSystem::from_label("A1").unwrap();
        let r = weight_report(&a1, &Weight::from_ints(&[1])).unwrap();
        assert_eq!(r.coefficient_sum, rat(1, 2));
        assert_eq!(r.fs_indicator, FsIndicator::Minus);

        let b2 = RootSystem::from_label("B2").unwrap();
        assert_eq!(weight_report(&b2, &Weight::from_ints(&[0, 1])).unwrap().fs_indicator, FsIndicator::Minus);
    }

    #[test]
    fn indicator_matches_form_symmetry() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "D4", "A4", "B4", "C4"] {
            let rs = RootSystem::from_label(label).unwrap();
            for i in 0..rs.rank() {
                let w = Weight::fundamental(rs.rank(), i);
                let Ok(m) = build_irrep(&rs, &w) else { continue };
                let r = weight_report(&rs, &w).unwrap();
                match invariant_bilinear_form(&m) {
                    Ok(b) => {
                        let want = if b.symmetry == 1 { FsIndicator::Plus } else { FsIndicator::Minus };
                        assert_eq!(r.fs_indicator, want, "{label} ω{}", i + 1);
                    }
                    Err(_) => assert_eq!(r.fs_indicator, FsIndicator::NotSelfDual, "{label} ω{}", i + 1),
                }
            }
        }
    }
}
