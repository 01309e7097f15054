use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {z} lies outside the closed unit disc")]
    OutsideDisc { z: Complex64 },

    #[error("point {z} must lie in the open unit disc")]
    NotInOpenDisc { z: Complex64 },

    #[error("Möbius parameter {w} is too close to the unit circle (1 - |w| = {gap:e})")]
    ParamNearBoundary { w: Complex64, gap: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value {value} at quadrature node {index} (w = {node})")]
    NonFinite {
        index: usize,
        node: Complex64,
        value: Complex64,
    },

    #[error("integral does not stabilize under refinement: estimates {estimates:?}")]
    Divergent { estimates: Vec<f64> },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
