use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("digit base {0} is not a valid base (must be at least 2)")]
    InvalidBase(u64),

    #[error("sieve limit {requested} exceeds the memory budget of {budget}")]
    SieveBudget { requested: u64, budget: u64 },

    #[error("sieve covers primes up to {have}, but primes up to {need} are required")]
    InsufficientSieve { have: u64, need: u64 },

    #[error("not a squarefree prime product: {0}")]
    NotSquarefree(String),

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),

    #[error("checksum mismatch in checkpoint record {line}")]
    ChecksumMismatch { line: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
