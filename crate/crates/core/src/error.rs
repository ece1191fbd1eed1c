use thiserror::Error;

/// Errors produced by tensor construction and the algorithms built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("coordinate {coord:?} out of range for dimensions {dims:?}")]
    CoordinateOutOfRange { coord: Vec<u64>, dims: Vec<u64> },

    #[error("duplicate coordinate {0:?}")]
    DuplicateCoordinate(Vec<u32>),

    #[error("dense gate exceeded: {cells} cells > {gate}")]
    DenseGateExceeded { cells: u128, gate: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("input is not symmetric at coordinate {0:?}")]
    NotSymmetric(Vec<u32>),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
