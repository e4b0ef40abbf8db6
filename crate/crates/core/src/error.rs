use num_rational::BigRational;
use thiserror::Error;

/// Errors raised by the series, modular-form and finite-field machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series not invertible: leading coefficient is zero to the known precision")]
    NotInvertible,
    #[error("valuation undefined to this precision (series is zero below exponent {0})")]
    ValuationUndefined(BigRational),
    #[error("exponent lattice denominator {needed} exceeds the cap {cap}")]
    LatticeCap { needed: u64, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown series name `{0}`")]
    UnknownName(String),
    #[error("not identifiable: {0}")]
    NotIdentifiable(String),
    #[error("insufficient precision: have {have} known coefficients, need at least {need}")]
    InsufficientPrecision { have: usize, need: usize },
    #[error("non-homogeneous modular polynomial")]
    NonHomogeneous,
    #[error("linearly dependent series at index {index}")]
    Dependent { index: usize },
    #[error("zero series has no normalization")]
    ZeroSeries,
    #[error("prime {p} divides the denominator of coefficient {index}")]
    DenominatorDivisibleByP { p: u64, index: usize },
    #[error("inexact polynomial division: {0}")]
    InexactDivision(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
