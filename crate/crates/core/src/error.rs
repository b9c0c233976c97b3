use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("braid orbit exceeds node cap {0}")]
    OrbitCapExceeded(usize),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("no common multiple found up to degree cap {0}")]
    CapExceeded(usize),
    #[error("braid relation of order {0} is not supported")]
    UnsupportedOrder(usize),
    #[error("words {0} and {1} do not represent the same element")]
    NotSameElement(String, String),
    #[error("weight is degenerate: {0}")]
    DegenerateWeight(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("Cartan data is not of type A")]
    NotTypeA,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
