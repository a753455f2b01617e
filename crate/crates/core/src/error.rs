use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller asked for something outside an operation's domain.
    Usage,
    /// A configured size or runtime ceiling would be exceeded.
    Resource,
    /// Input data (code files, matrices, checkpoints) is malformed or inconsistent.
    Corruption,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Domain(String),

    #[error("{value} is not a prime")]
    NotPrime { value: u64 },

    #[error("valuation of zero is infinite")]
    ZeroValuation,

    #[error("{what}: {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("sweep covers {cells} cells; pass the long-run acknowledgment to run it")]
    LongRunNotAcknowledged { cells: u128 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("checkpoint {path}: {message}")]
    Checkpoint { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_)
            | Error::NotPrime { .. }
            | Error::ZeroValuation
            | Error::OutOfRange { .. } => ErrorKind::Usage,
            Error::Resource(_) | Error::LongRunNotAcknowledged { .. } => ErrorKind::Resource,
            Error::Parse { .. } | Error::Invalid(_) | Error::Checkpoint { .. } | Error::Io(_) => {
                ErrorKind::Corruption
            }
        }
    }

    pub(crate) fn out_of_range(what: &'static str, value: i64, lo: i64, hi: i64) -> Self {
        Error::OutOfRange { what, value, lo, hi }
    }
}
