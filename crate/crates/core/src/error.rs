use thiserror::Error;

/// Errors raised by the library.
///
/// Domain errors (a pair that is not a quantum pair, a scale outside its
/// admissible range) are distinguished from malformed input so that front
/// ends can map them to different exit codes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not symplectic (residual {residual:e})")]
    NotSymplectic { residual: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate body: {0}")]
    Degenerate(String),

    #[error("bodies do not form a quantum polar pair (lambda_max = {lambda_max})")]
    NotQuantumPair { lambda_max: f64, witness: Vec<f64> },

    #[error("scale {lambda} outside admissible range [1, {lambda_max}]")]
    ScaleOutOfRange { lambda: f64, lambda_max: f64 },

    #[error("no quantum covariance with these marginals: sigma_xx*sigma_pp = {product} < hbar^2/4")]
    NoQuantumSolution { product: f64 },

    #[error("sampling grid too small: {0}")]
    InsufficientGrid(String),

    #[error("optimizer did not converge after {iterations} iterations (gap {gap:e})")]
    Convergence { iterations: usize, gap: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that describe a valid request the mathematics rejects,
    /// as opposed to malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotQuantumPair { .. }
                | Error::ScaleOutOfRange { .. }
                | Error::NoQuantumSolution { .. }
                | Error::NotSymplectic { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::Convergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
