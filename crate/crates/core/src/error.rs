use thiserror::Error;

/// Errors raised by the operad engine, the complex builders and the
/// operad-file reader.
///
/// Mathematical failures (a violated axiom or identity) are never errors;
/// they are reported as [`crate::report::VerificationReport`] contents.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("slot {slot} out of range for an element of arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("index {index} out of range (valid: {min}..={max})")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    /// The requested operation needs an arity beyond the data the operad carries.
    #[error("arity {needed} exceeds the arity cap {cap}; rerun with a larger cap or smaller operands")]
    Truncation { needed: usize, cap: usize },

    #[error("operad has no cyclic structure (tau absent)")]
    TauAbsent,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("element is not normalized: s^{index} of it is {witness}")]
    NotNormalized { index: usize, witness: String },

    #[error("not a cycle: its boundary is {witness}")]
    NotACycle { witness: String },

    #[error("bidegree (arity {arity}, grading {grading}) is not covered by the homology table")]
    MissingBidegree { arity: usize, grading: i64 },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("semantic error in {entry}: {message}")]
    Semantic { entry: String, message: String },

    #[error("component rank {rank} at arity {arity} exceeds the limit {limit}")]
    RankLimit { arity: usize, rank: usize, limit: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("built-in unavailable: {0}")]
    Unavailable(String),

    #[error("operad failed validation: {0}")]
    ValidationFailed(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::Semantic { .. } | Error::InvalidInput(_) | Error::Unavailable(_))
    }

    pub(crate) fn semantic(entry: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Semantic { entry: entry.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
