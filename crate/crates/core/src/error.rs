use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: an odd prime is required")]
    InvalidPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("modulus {p}^{n} exceeds the supported word size")]
    PrecisionTooLarge { p: u64, n: u32 },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("indeterminate at truncation: {0}")]
    Indeterminate(String),
    #[error("nonzero mu-invariant: {0}")]
    NonzeroMu(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("sequence not exact: {0}")]
    NotExact(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Schema(err.to_string())
    }
}
