use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("invalid weight {value} at frame {index}: weights must be strictly positive and finite")]
    InvalidWeight { index: usize, value: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("reference entry of the de-whitened eigenvector vanished (|x| = {0:e})")]
    DegenerateReference(f64),

    #[error("distortionless constraint is degenerate (|v^H R^-1 v| = {0:e})")]
    DegenerateConstraint(f64),

    #[error("noise mask selects no frames: {0}")]
    InvalidMask(String),

    #[error("bin carries no energy")]
    SilentBin,

    #[error("{path}: {source}")]
    Wav {
        path: PathBuf,
        #[source]
        source: hound::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Numerical failures that the pipeline degrades gracefully on, as opposed to
    /// input errors that abort the job.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::ConvergenceFailure { .. }
                | Error::DegenerateReference(_)
                | Error::DegenerateConstraint(_)
                | Error::SilentBin
        )
    }
}
