//! Error type shared across the crate.
//!
//! Variants map onto the CLI exit codes: config errors exit 2, I/O errors
//! exit 3, numerical failures exit 4 and dimension mismatches exit 5.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpftiError {
    /// Invalid parameter value or malformed configuration/header.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Shape, size or index-range violation (includes non-power-of-two sizes).
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Numerical failure, e.g. the solver did not converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl SpftiError {
    /// Process exit code for the CLI (0 is success).
    pub fn exit_code(&self) -> i32 {
        match self {
            SpftiError::Config(_) => 2,
            SpftiError::Io(_) => 3,
            SpftiError::Numerical(_) => 4,
            SpftiError::Dimension(_) => 5,
        }
    }
}

impl From<serde_json::Error> for SpftiError {
    fn from(err: serde_json::Error) -> Self {
        SpftiError::Config(format!("malformed JSON: {err}"))
    }
}

pub type Result<T> = std::result::Result<T, SpftiError>;
