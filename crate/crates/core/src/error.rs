use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty interior on axis {axis}")]
    EmptyInterior { axis: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at {0}")]
    Pole(String),

    /// A bounded search ran past its guaranteed-existence cap. Always a bug
    /// or a pathological input, never a legal outcome.
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("no samples")]
    NoSamples,

    #[error("end of Farey sequence")]
    EndOfSequence,

    #[error("invalid plan: {}", .0.join("; "))]
    Plan(Vec<String>),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
