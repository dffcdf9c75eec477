//! Chevalley bases, compact Q-forms and involutions.

mod involution;
mod qform;
mod structure;

pub use involution::{diagram_involution, inner_involution, normalize_for_involution, InvolutionSpec, NormalizedBasis};
pub use qform::{
    compact_conjugation, exp_nilpotent, exp_nilpotent_sparse, real_rank, standard_qform, su2_subalgebra,
    twisted_qform, verify_qform, verify_qform_basis, QFormKind, QFormReport, QFormSpec, Su2Report,
};
pub use structure::{bracket, chevalley_basis, Basis, LieElement, StructureConstants};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("elements belong to different Lie algebras")]
    MismatchedRootSystems,
    #[error("Jacobi identity fails on {0}")]
    JacobiFailure(String),
    #[error("structure constant pattern fails: {0}")]
    NPatternFailure(String),
    #[error("simple root index {0} out of range")]
    InvalidSimpleRoot(usize),
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("scalar {0} is outside the supported roots of unity")]
    UnsupportedScalar(String),
}
