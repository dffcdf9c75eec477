//! Exact scalars: big rationals, the cyclotomic field Q(ζₙ) (by default
//! n = 24), Hilbert symbols and quaternion ramification.

pub mod cyclotomic;
pub mod hilbert;
pub mod primes;
pub mod rational;

pub use cyclotomic::{cyc_arith, ArithOp, CyclotomicElem, DEFAULT_ORDER};
pub use hilbert::{
    hilbert_symbol, is_sum_of_two_rational_squares, quaternion_ramification,
    two_squares_witness, Place,
};
pub use num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic orders {0} and {1} are incompatible")]
    OrderMismatch(u32, u32),
    #[error("unsupported cyclotomic order {0}")]
    UnsupportedOrder(u32),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("cannot certify the factorization of {0} within the trial-division bound")]
    FactorizationLimit(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}
