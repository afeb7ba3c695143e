use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root datum: type {family} rank {rank}")]
    UnsupportedDatum { family: char, rank: usize },

    #[error("level parameter e must be positive, got {0}")]
    InvalidLevel(i64),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("weight has {got} coordinates, expected {expected}")]
    WrongRank { expected: usize, got: usize },

    #[error("weight {mu:?} is not in the dot orbit of {base:?}")]
    NotInOrbit { mu: Vec<i64>, base: Vec<i64> },

    #[error("resource cap exceeded: {what} exceeded {cap}")]
    ResourceCap { what: &'static str, cap: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition {parts:?} has more than {n} parts")]
    TooManyParts { parts: Vec<u32>, n: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("cache fingerprint mismatch: file has {found}, context is {expected}")]
    FingerprintMismatch { expected: String, found: String },

    #[error("unsupported cache version {0}")]
    CacheVersion(String),

    #[error("corrupt cache file at line {line}: {reason}")]
    CorruptCache { line: usize, reason: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("table validation failed: {0}")]
    Validation(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
