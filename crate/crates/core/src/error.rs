use thiserror::Error;

/// Errors produced by the closed-form formulas and the Fock-space oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input data (shape, symmetry, index range, spec balance).
    #[error("validation error: {0}")]
    Validation(String),

    /// The formula divides by zero or evaluates a log singularity.
    #[error("singular: {0}")]
    Singular(String),

    /// Two quadrature levels disagree beyond tolerance.
    #[error("quadrature did not converge: max deviation {deviation:.3e} > {tolerance:.1e}")]
    Convergence { deviation: f64, tolerance: f64 },

    /// The Fock truncation is too small for the requested accuracy.
    #[error("cutoff too small: {0}")]
    Cutoff(String),

    /// A density matrix failed its positivity or Hermiticity check.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An inverse was requested for a matrix with an unresolvable eigenvalue.
    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    /// Entropy differences did not scale quadratically in the perturbation strength.
    #[error("non-quadratic scaling: {0}")]
    NonQuadratic(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
