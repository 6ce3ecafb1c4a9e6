use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum HyperError {
    #[error("point with norm {norm} is not inside the unit ball")]
    OutsideBall { norm: f64 },

    #[error("point with norm {norm} is not on the unit sphere")]
    NotOnSphere { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension n = {n} not supported here (need n >= {min})")]
    UnsupportedDimension { n: usize, min: usize },

    #[error("singular evaluation: {0}")]
    Singular(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("finite-difference stencil leaves the ball at |x| = {norm}, h = {step}")]
    StencilOutsideBall { norm: f64, step: f64 },

    #[error("source field has no declared decay class")]
    UndeclaredDecay,

    #[error("unknown field spec `{0}`")]
    UnknownField(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HyperError>;

pub(crate) fn invalid(msg: impl Into<String>) -> HyperError {
    HyperError::InvalidParameter(msg.into())
}
