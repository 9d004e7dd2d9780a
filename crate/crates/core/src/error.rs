use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live on different curves")]
    CurveMismatch,
    #[error("singular curve: discriminant g2^3 - 27 g3^2 vanishes")]
    SingularCurve,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("series precision exhausted: {0}")]
    Precision(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported point: {0}")]
    UnsupportedPoint(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numeric evaluation failed: {0}")]
    Numeric(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
