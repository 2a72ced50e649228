use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("spin {0} is not available in the reference table")]
    NotAvailable(String),

    /// An exact computation produced something that cannot happen for a
    /// correct implementation (e.g. a non-integral characteristic
    /// polynomial coefficient).
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    /// A root that must be real and non-negative was not.
    #[error("spectral consistency violated: {0}")]
    SpectralConsistency(String),

    #[error("root finder did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    NumericFailure { iterations: usize, best_residual: f64 },

    #[error("distinct eigenvalues {0:.6e} and {1:.6e} are too close for interpolation at this precision; increase the precision")]
    IllConditioned(f64, f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
