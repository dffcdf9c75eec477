//! Irreducible highest-weight modules, their real structures, and rational
//! lattices generated from a highest-weight vector.

mod lattice;
mod module;
mod real;

pub use lattice::{
    descend_to_q, lattice_from_seed, qform_generate, verify_qform_of_module, Coefficients, LatticeReport,
    RationalLattice,
};
pub use module::{build_irrep, build_irrep_with_cap, contravariant_gram, dim_cap, HighestWeightModule, WeightSpace, DEFAULT_DIM_CAP};
pub use real::{
    doubled_root_coords, invariant_bilinear_form, real_structure_selfdual, sigma_prime_twisted, InvariantForm, RealStructure,
    StructureKind, TwistedCertificate,
};

use thiserror::Error;

use crate::chevalley::ChevalleyError;
use crate::exactfield::FieldError;
use crate::rootsys::RootSysError;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("module dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: String, cap: usize },
    #[error("highest weight must be dominant and integral")]
    NotDominant,
    #[error("weight {0} is not below the highest weight")]
    NotInSupport(String),
    #[error("the module is not self-dual")]
    NotSelfDual,
    #[error("hypotheses fail: {0}")]
    Hypotheses(String),
    #[error("no simple root has an odd coefficient in 2λ; hypotheses of the twisted obstruction fail")]
    NoOddTau,
    #[error("a Q-form of kind {0} is required")]
    WrongForm(String),
    #[error("seed vectors must lie in the highest weight space")]
    NonInvariantSeed,
    #[error("the conjugation does not preserve the lattice")]
    NotPreserved,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
}
