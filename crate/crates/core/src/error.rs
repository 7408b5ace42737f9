use thiserror::Error;

/// Errors raised by the arithmetic, series and dynamics layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),
    #[error("operands belong to different ring configurations")]
    ConfigMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("series is not invertible under composition: {0}")]
    NotInvertible(String),
    #[error("linear coefficient is a root of unity to working precision (degree {degree})")]
    RootOfUnityLinearCoefficient { degree: usize },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("series has a non-integral coefficient at degree {0}")]
    NonIntegralSeries(usize),
    #[error("truncation degree {have} too shallow, need at least {need}")]
    TruncationTooShallow { need: usize, have: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("mismatch with theorem: {0}")]
    MismatchWithTheorem(String),
    #[error("invalid Lubin-Tate template: {0}")]
    InvalidTemplate(String),
    #[error("series do not commute: {0}")]
    NotCommuting(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
