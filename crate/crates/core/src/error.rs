use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("membership value {0} is outside [0, 1]")]
    OutOfUnitInterval(String),

    #[error("cut level {level} is outside {range}")]
    LevelOutOfRange { level: String, range: &'static str },

    #[error("cannot parse {0:?} as an exact value")]
    BadValue(String),

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("invalid cut chain: {0}")]
    InvalidChain(String),

    #[error("invalid size vector: {0}")]
    InvalidSizeVector(String),

    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(i64),

    #[error("{cells} cells exceeds the enumeration cap of {cap}")]
    TooManyCells { cells: usize, cap: usize },

    #[error("enumeration would produce {projected} chains, above the ceiling of {ceiling}")]
    Infeasible { projected: BigUint, ceiling: u64 },

    #[error("corpus mixes matrix orders {first} and {other}")]
    MixedOrders { first: usize, other: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
