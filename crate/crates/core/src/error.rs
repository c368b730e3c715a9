use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid cycle type: {0}")]
    InvalidCycleType(String),

    #[error("invalid group label {label:?}: {reason}")]
    InvalidGroupLabel { label: String, reason: String },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u64, found: u64 },

    #[error("element does not belong to the group: {0}")]
    ForeignElement(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no exponent given for class {0}")]
    MissingExponent(String),

    #[error("tail series diverges: beta + epsilon = {0} is not negative")]
    Divergent(String),

    #[error("malformed splitting pattern {text:?}: {reason}")]
    MalformedPattern { text: String, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("record {label}: {reason}")]
    InvalidRecord { label: String, reason: String },

    #[error("insufficient data for {label}: {reason}")]
    InsufficientData { label: String, reason: String },

    #[error("no record labelled {0}")]
    UnknownRecord(String),

    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
}
