use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("base q = {0} is outside the open interval (0, 1)")]
    InvalidBase(f64),

    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(f64),

    #[error("series or product does not converge: {0}")]
    NonConvergent(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("argument outside the domain: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, QError>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(QError::InvalidTolerance(tol))
    }
}
