//! Free noncommutative algebra over exact rationals.

mod generator;
mod graded;
mod poly;
pub mod serial;

pub use generator::{Generator, Word};
pub use graded::{exp_truncated, log_truncated, GradedSeries};
pub use poly::NcPoly;

use thiserror::Error;

/// Exact coefficient type, always in lowest terms with positive denominator.
pub type Scalar = num_rational::BigRational;

/// `num / den` as a [`Scalar`].
pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(num.into(), den.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcAlgError {
    #[error("exponential argument has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("logarithm argument must have constant term 1")]
    NonUnitConstantTerm,
    #[error("graded series needs at least the degree-0 component")]
    EmptySeries,
    #[error("component {degree} is not homogeneous of degree {degree}")]
    NotHomogeneous { degree: usize },
    #[error("generator id must be nonempty")]
    EmptyGeneratorId,
    #[error("invalid coefficient `{0}`")]
    BadCoefficient(String),
    #[error("word refers to undeclared generator #{0}")]
    GeneratorRef(usize),
    #[error("malformed polynomial document: {0}")]
    Json(String),
}
