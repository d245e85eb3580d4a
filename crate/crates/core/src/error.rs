use thiserror::Error;

/// Errors produced by the bound and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The safeguarded root finder hit its iteration cap.
    #[error("inverse incomplete beta did not converge for alpha={alpha}, a={a}, b={b}")]
    NoConvergence { alpha: f64, a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, BoundsError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(BoundsError::Domain(msg.into()))
}
