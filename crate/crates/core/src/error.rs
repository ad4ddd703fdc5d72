use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("occupation {index} is outside a basis of size {dim}")]
    OutOfRange { index: usize, dim: usize },

    #[error("cutoff must be at least {min}, got {got}")]
    InvalidCutoff { got: usize, min: usize },

    #[error("truncation tail {tail:e} exceeds tolerance {tolerance:e}")]
    Truncation { tail: f64, tolerance: f64 },

    #[error("state is not normalized (norm = {norm})")]
    Unnormalized { norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wave packets differ in {0}")]
    MismatchedPackets(&'static str),

    #[error("matrix of order {n} exceeds the limit {bound} for {method}")]
    TooLarge { n: usize, bound: usize, method: &'static str },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("quadrature grid too coarse: need at least {required} points per axis, got {got}")]
    InsufficientGrid { required: usize, got: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("density {value:e} below floor {floor:e} at k = {k:?}")]
    UndefinedRatio { k: Vec<f64>, value: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
