use thiserror::Error;

/// Errors shared across the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("evaluation point {0} is a singular point")]
    SingularPoint(f64),
    #[error("quadrature tolerance not met: requested {requested}, achieved {achieved} (estimate {estimate})")]
    ToleranceNotMet {
        requested: f64,
        achieved: f64,
        estimate: f64,
    },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("insufficient variation: {0}")]
    InsufficientVariation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
