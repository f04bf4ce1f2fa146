use thiserror::Error;

/// Errors raised by the counting engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative component")]
    NegativeComponent,
    #[error("not a lowering multi-index")]
    NotLowering,
    #[error("weight must be -1 (got {0})")]
    WeightNotMinusOne(i64),
    #[error("fertility sum violation: fertilities sum to {sum}, expected {expected}")]
    FertilitySum { sum: u64, expected: u64 },
    #[error("fertility index {0} is below -1")]
    IndexBelowMinusOne(i64),
    #[error("unknown decoration `{0}`")]
    UnknownDecoration(String),
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
