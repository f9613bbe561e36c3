//! Error type shared across the library.

use thiserror::Error;

/// Everything that can go wrong in exact arithmetic at a fixed truncation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two operands live in different coefficient rings.
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    /// Series shapes disagree (variable count or degree bound).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Division is not exact in the ring.
    #[error("inexact division: {0}")]
    InexactDivision(String),

    /// A p-adic result would retain no guaranteed digits.
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// A stored p-adic value would need a negative valuation shift.
    #[error("negative valuation shift where an integral element is required: {0}")]
    NotIntegral(String),

    /// An element expected to be primitive (a Lie element) is not.
    #[error("not a Lie element: {0}")]
    NotPrimitive(String),

    /// A series (operator log/exp, group inversion, ...) failed to terminate
    /// under the ring's truncation.
    #[error("series did not terminate: {0}")]
    NoTermination(String),

    /// Input data is malformed (unparsable coefficient, bad JSON, bad law).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A named builtin object does not exist.
    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
