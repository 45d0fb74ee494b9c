use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("permutation {0} is not Grassmannian (descents away from 0)")]
    NotGrassmannian(String),

    #[error("window (-{m},{m}] too small: {what}")]
    WindowTooSmall { m: i64, what: String },

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: i64, range: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("series constant term is not 1")]
    NonUnitConstant,

    #[error("input already contains c' variables")]
    CPrimeInInput,

    /// Signals an upstream bug: a division that must be exact was not.
    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    #[error("expansion failed: {reason}; offending terms: {offending}")]
    Expansion { reason: String, offending: String },

    #[error("truncation order too low: {0}")]
    TruncationTooLow(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
