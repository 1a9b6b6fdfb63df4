use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate vertex set: affine span has dimension {dim} < ambient dimension {ambient}")]
    Degenerate { dim: usize, ambient: usize },

    #[error("point {point:?} does not lie in {m}P")]
    NotInDilation { point: Vec<i64>, m: usize },

    #[error("window exceeded: {0}")]
    WindowExceeded(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
