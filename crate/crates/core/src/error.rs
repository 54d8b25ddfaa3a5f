use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum of 65535")]
    ModulusTooLarge(u64),
    #[error("no inverse of zero")]
    ZeroInverse,
    #[error("residue {value} out of range for GF({q})")]
    OutOfRange { value: u64, q: u32 },
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("parity-check not full rank (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("enumeration budget exceeded: {what} needs {needed} entries, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("syndrome table cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
