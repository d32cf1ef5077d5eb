use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// Gram matrix `AAᵀ + BBᵀ` is not positive definite.
    #[error("singular constraint: non-positive pivot {pivot:e} at row {row}; [A B] must be of full row rank")]
    SingularConstraint { row: usize, pivot: f64 },

    #[error("operator norm estimate did not converge after {iterations} iterations (last estimate {estimate})")]
    Estimation {
        iterations: usize,
        estimate: f64,
        vector: Vec<f64>,
    },

    #[error("numerical error in {context}: non-finite value at index {index}")]
    Numerical { context: &'static str, index: usize },

    #[error("divergence at outer iteration {t}: non-finite iterate ({hint})")]
    Divergence {
        t: usize,
        hint: String,
        trace: Vec<crate::solver::TraceRecord>,
    },

    #[error("inner solver missed tolerance {tolerance:e} at outer iteration {t} (achieved {achieved:e})")]
    Framework {
        t: usize,
        tolerance: f64,
        achieved: f64,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
