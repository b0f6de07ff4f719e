use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("norm is not differentiable at ({x}, {y}); use the norming set instead")]
    NonSmooth { x: f64, y: f64 },

    #[error("operation is undefined at the zero vector")]
    ZeroVector,

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("polynomial of degree {0} must have even degree")]
    OddDegree(usize),

    #[error("coefficient list has length {len}, expected {expected}")]
    CoefficientLength { len: usize, expected: usize },

    #[error("vectors are linearly dependent")]
    DependentVectors,

    #[error("generator is not positive definite (min on the circle {min:e})")]
    NotPositiveDefinite { min: f64 },

    #[error("linear system is singular")]
    Singular,

    #[error("Q vanishes at ({x}, {y})")]
    QVanishes { x: f64, y: f64 },

    #[error("{0} is not twice differentiable off the origin")]
    NotSmoothVariant(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
