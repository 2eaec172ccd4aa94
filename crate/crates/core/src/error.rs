use thiserror::Error;

/// Errors surfaced by field constructors, metric guards and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: expected {expected}, found {found}")]
    GridMismatch { expected: String, found: String },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("{what} must be positive; min {min:.3e} at grid point {at:?}")]
    NotPositive {
        what: &'static str,
        min: f64,
        at: Vec<usize>,
    },

    #[error("Beltrami coefficient out of range: max |mu| = {max_abs:.12} at grid point {at:?}")]
    BeltramiBound { max_abs: f64, at: Vec<usize> },

    #[error("unsupported differential degree {degree}; this operation requires degree {required}")]
    UnsupportedDegree { degree: usize, required: usize },

    #[error("field is not real: max |Im| = {max_im:.3e}")]
    NotReal { max_im: f64 },

    #[error(
        "iterative solver did not converge after {iterations} iterations \
         (normal-equation residual {final_residual:.3e}); history available"
    )]
    NonConvergence {
        iterations: usize,
        final_residual: f64,
        history: Vec<f64>,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
