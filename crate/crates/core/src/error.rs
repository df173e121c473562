use thiserror::Error;

use crate::circuit::CircuitError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the range the operation accepts.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The request is well-formed but exceeds a hard implementation limit.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid circuit: {0}")]
    Circuit(#[from] CircuitError),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A k-path is known to exist but the randomized extraction could not
    /// isolate one within its retry budget.
    #[error("extraction failed after {attempts} attempts")]
    ExtractionFailed { attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parameter(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}
