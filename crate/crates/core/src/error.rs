//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a subgroup: {small} is not an integer multiple of {big}")]
    NotASubgroup { big: String, small: String },

    #[error("not a center: {0}")]
    NotACenter(String),

    /// Both parameters have the same value; no monomial quadratic transform remains.
    #[error("chain terminated: nu(z) = nu(w) = {0}")]
    ChainTerminated(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("not divisible: term {term} is not divisible by {divisor}")]
    NotDivisible { term: String, divisor: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 1,
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
