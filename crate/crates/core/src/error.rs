use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation only makes sense in the existence regime γ > 1.
    #[error("regime error: {0}")]
    Regime(String),

    /// Two inputs that must describe the same family member do not.
    #[error("inconsistent specification: {0}")]
    Spec(String),

    /// A quadrature or root-finder failed to reach its tolerance.
    #[error("numerics error: {message} (achieved error estimate {achieved:e})")]
    Numerics { message: String, achieved: f64 },

    /// Step-size control broke down, or the start point is unusable.
    #[error("step error: {0}")]
    Step(String),

    /// Newton iteration on the half-strip did not reach its tolerance.
    #[error("no convergence after {iterations} Newton iterations (best scaled residual {best_residual:e})")]
    NonConvergence {
        iterations: usize,
        best_residual: f64,
        residual_history: Vec<f64>,
    },
}

impl Error {
    pub(crate) fn numerics(message: impl Into<String>, achieved: f64) -> Self {
        Error::Numerics {
            message: message.into(),
            achieved,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
