use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// Input data that violates a domain invariant; `path` names the field.
    #[error("{path}: {message}")]
    Validation { path: String, message: String },

    #[error("unknown variable pair {0}")]
    UnknownPair(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The constraints admit no coupling. `certificate` is a vector `y` with
    /// `yᵀA ≤ 0` and `yᵀb > 0` for the equality system `Ax = b, x ≥ 0`.
    #[error("constraints are infeasible")]
    Infeasible { certificate: Vec<Rational> },

    #[error("unbounded objective")]
    Unbounded,

    #[error("closed-form mismatch: {0}")]
    Mismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
