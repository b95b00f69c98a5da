//! Crate-wide error type.

/// Refinement trace attached to quadrature diagnostics: `(level, partial)`.
pub type Trace = Vec<(usize, f64)>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid argument (bad grid, parameter out of range, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation outside the domain of an operator (e.g. kernel at s >= t).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Quadrature did not settle; carries the partial value and the
    /// refinement trace so callers can tell divergence from slow decay.
    #[error("quadrature did not converge in {context}: partial {partial:.6e}")]
    Quadrature {
        context: String,
        partial: f64,
        trace: Trace,
    },

    /// A fractional derivative factor of the GLS product diverged.
    #[error("divergent fractional derivative: {factor}")]
    DivergentDerivative { factor: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
