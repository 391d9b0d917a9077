use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the spectral graph toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed edge-list input.
    #[error("parse error: {message} at line {line}")]
    Parse { line: usize, message: String },

    /// Two densities that must share abscissae do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// No eigenvalue (or degree) sample to estimate a density from.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// Every candidate model has infinite divergence from the observation.
    #[error("no feasible model: {0}")]
    NoFeasibleModel(String),

    /// Eigensolver failure or non-finite intermediate values.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error("malformed cache entry {path}: {message}")]
    Cache { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
