//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. The variants mirror how the
//! command-line front end maps failures onto exit codes: domain and input
//! errors are caller mistakes, numeric failures are convergence or
//! conditioning problems, and I/O errors wrap the underlying system error
//! together with the offending path.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violates an operation's preconditions (dimension
    /// mismatch, index out of range, probability outside (0,1), ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// External data (CSV, JSON, config) failed to parse or validate.
    #[error("input error: {0}")]
    Input(String),

    /// A numeric procedure failed: non-convergence, singularity beyond the
    /// jitter ladder, or a non-finite value where a finite one is required.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
