use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },
    #[error("{k} is not coprime to {n}")]
    NotCoprime { k: i64, n: u64 },
    #[error("{n} is not square-free")]
    NotSquarefree { n: u64 },
    #[error("{p} does not divide {n}")]
    NotDivisor { p: u64, n: u64 },
    #[error("characteristic {q} divides the order {n}")]
    CharacteristicDividesOrder { q: u64, n: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("elimination pivot vanishes: leading {k}x{k} scalar minor is zero")]
    ZeroPivot { k: usize },
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("divisibility lifting violated for p={p}, q={q}")]
    LemmaViolated { p: u64, q: u64 },
    #[error("campaign too large: about {estimate} orbits (limit {limit})")]
    TooLarge { estimate: f64, limit: f64 },
    #[error("checkpoint config digest {found} does not match {expected}")]
    DigestMismatch { expected: String, found: String },
    #[error("corrupt checkpoint line {line}: {reason}")]
    CorruptCheckpoint { line: usize, reason: String },
    #[error("symbolic re-verification disagrees with the modular verdict for {0}")]
    BackendDisagreement(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
