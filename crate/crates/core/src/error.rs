use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and model builders.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported grid: {0}")]
    UnsupportedGrid(String),

    /// A Gram (or metric) matrix lost positive definiteness.
    #[error("degenerate Gram matrix: smallest eigenvalue {min_eigenvalue:e} is not positive")]
    DegenerateGram { min_eigenvalue: f64 },

    /// The eigenvalue iteration ran out of budget. `partial` holds the
    /// eigenvalues deflated before giving up.
    #[error("no convergence after {iterations} iterations ({} eigenvalues deflated)", partial.len())]
    Convergence {
        iterations: usize,
        partial: Vec<Complex64>,
    },

    #[error("non-normalizable eigenfamily: Laguerre order {gamma} must exceed -1")]
    NonNormalizable { gamma: f64 },

    #[error("biorthogonality violated: max |<phi_n, eta_m> - delta_nm| = {deviation:e} exceeds {tolerance:e}")]
    NotBiorthogonal { deviation: f64, tolerance: f64 },

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
