use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("arity {arity} exceeds cap {cap}")]
    ArityCap { arity: usize, cap: usize },

    #[error("string has no block structure")]
    MissingBlocks,

    #[error("invalid block structure: d={d}, K={k} for length {len}")]
    InvalidBlocks { d: usize, k: usize, len: usize },

    #[error("value {0} is not an element of Z3")]
    NotZ3(i64),

    #[error("table has {actual} entries, expected 3^{arity} = {expected}")]
    TableSize {
        arity: usize,
        expected: usize,
        actual: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("search space of {size} assignments exceeds cap {cap}")]
    SearchCap { size: u128, cap: u128 },

    #[error("kind mismatch: expected {expected}, got {actual}")]
    KindMismatch { expected: String, actual: String },

    #[error("gadget certification failed: {0}")]
    CertificationFailure(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("function is not folded")]
    NotFolded,

    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
