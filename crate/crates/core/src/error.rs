use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum BaxError {
    /// Malformed caller input: dimension mismatches, out-of-range arguments.
    #[error("invalid input: {0}")]
    Input(String),

    /// Factorization failed even after jitter escalation.
    #[error("numerical failure: {message} (matrix size {size}, last jitter {jitter:e})")]
    Numerical {
        message: String,
        size: usize,
        jitter: f64,
    },

    /// A configuration cannot be satisfied (e.g. an infeasible ABC ball size).
    #[error("configuration error: {0}")]
    Config(String),

    /// A black-box response broke an algorithm's contract (e.g. negative edge cost).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no path from vertex {start} to vertex {dest}")]
    NoPath { start: usize, dest: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl BaxError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        BaxError::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        BaxError::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BaxError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, BaxError>;
