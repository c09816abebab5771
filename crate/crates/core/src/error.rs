//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Parameters outside the domain a formula is valid on.
    #[error("domain error: {0}")]
    Domain(String),
    /// An integrand evaluated to NaN or infinity at a quadrature node.
    #[error("non-finite integrand value at ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    /// A root bracket failed to enclose a sign change.
    #[error("no sign change in bracket [{lo}, {hi}]: {what}")]
    Bracket { what: String, lo: f64, hi: f64 },
    /// The masked Laplacian solve broke down.
    #[error("singular solve: {0}")]
    SingularSolve(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
