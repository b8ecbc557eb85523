use thiserror::Error;

/// Errors raised by surface construction, period solving and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("period problem not solved: {what} residual {residual:e} exceeds {tolerance:e}")]
    PeriodFailed {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("Newton iteration failed to converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian (|det| = {0:e})")]
    SingularJacobian(f64),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("group generated by {generators} generators did not close within {bound} elements")]
    GroupClosure { generators: usize, bound: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
