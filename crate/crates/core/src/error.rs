use thiserror::Error;

/// Errors raised by the exact algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    ZeroGcd,
    #[error("inexact division: nonzero remainder")]
    InexactDivision,
    #[error("not a perfect square: {0}")]
    NotSquare(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("space has a base point")]
    BasePoint,
    #[error("element is not in the space")]
    NotInSpace,
    #[error("bilinear form check failed: {0}")]
    Form(String),
    #[error("Witt basis construction failed: {0}")]
    Witt(String),
    #[error("spinor computation failed: {0}")]
    Spin(String),
    #[error("value is not rational: {0}")]
    NotRational(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
