use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} exceeds the configured bound {bound}")]
    FieldTooLarge { p: u64, k: u32, bound: u64 },
    #[error("zero where a unit is required: {0}")]
    ZeroUnit(&'static str),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not irreducible: {0}")]
    Reducible(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("degenerate bilinear form")]
    Degenerate,
    #[error("element of rank {0} is not in the augmentation ideal")]
    NonzeroRank(i64),
    #[error("no nilpotency exponent found up to {0}")]
    NilpotencyBound(u32),
    #[error("element is ramified at {0}")]
    Ramified(String),
    #[error("step budget of {0} exhausted")]
    BudgetExceeded(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
