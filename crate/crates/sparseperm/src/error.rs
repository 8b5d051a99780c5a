use thiserror::Error;

/// Errors for precondition violations, malformed inputs, and arithmetic limits.
///
/// Structured negative *outcomes* (recovery abort certificates, "no witness
/// found", "no solution within k_max") are not errors; they are ordinary
/// results carried by the return types of the operations that produce them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid partition word: {0}")]
    InvalidWord(String),
    #[error("partition index {idx} out of range (D_lambda = {d})")]
    IndexOutOfRange { idx: u128, d: u128 },
    #[error("128-bit arithmetic overflow while {0}")]
    Overflow(&'static str),
    #[error("D_lambda = {d} exceeds the enumeration cap {cap}")]
    CapExceeded { d: u128, cap: u64 },
    #[error("value mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed file: {0}")]
    MalformedFile(String),
    #[error("io: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
