use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a series with no terms below its precision")]
    DivisionByZeroSeries,
    #[error("exact division would produce an infinite series; truncate an operand first")]
    UnboundedPrecision,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("matrix determinant must be positive")]
    NotPositiveDet,
    #[error("matrix is not in SL2(Z)")]
    NotUnimodular,
    #[error("enumeration of {size} elements exceeds guard {guard}")]
    GuardExceeded { size: u64, guard: u64 },
    #[error("weight {0} is odd or otherwise unsupported here")]
    OddWeight(i64),
    #[error("cannot slash {0}")]
    UnknownTransformation(String),
    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: String, available: String },
    #[error("series is not a quasimodular form of the stated weight and depth")]
    NotDecomposable,
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u64, u64),
    #[error("twist mismatch")]
    TwistMismatch,
    #[error("twists do not commute")]
    NonCommutingTwists,
    #[error("covariance violation: {0}")]
    CovarianceViolation(String),
    #[error("operator has values of positive depth")]
    DepthNotZero,
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(i64, i64),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("no interpretation for generator {0}")]
    MissingInterpretation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
