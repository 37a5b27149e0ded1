//! Error and result types shared by the library and the command-line tool.

use std::io;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The caller supplied an argument outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Input data failed validation or could not be parsed.
    #[error("data error: {0}")]
    Data(String),
    /// An underlying I/O operation failed.
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    /// An internal invariant was violated; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code reported by the command-line front end: usage
    /// problems exit 1, bad or unreadable data exits 2, bugs exit 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 1,
            Error::Data(_) | Error::Io(_) => 2,
            Error::Internal(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
