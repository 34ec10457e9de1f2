use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("l must be an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("m must be at least 1")]
    ZeroExponent,
    #[error("2 is not a primitive root mod {0}")]
    NotPrimitiveRoot(u64),
    #[error("extension degree {s} exceeds the supported maximum {max}")]
    DegreeTooLarge { s: u32, max: u32 },
    #[error("code construction needs 2s <= {max}, got 2s = {got}")]
    CodeTooLarge { got: u32, max: u32 },
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("modulus self-test failed: {0}")]
    Reducible(String),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element {value:#x} does not fit in {bits} bits")]
    ElementOutOfRange { value: u64, bits: u32 },
    #[error("subvector index {index} out of range 0..{bound}")]
    SubvectorIndex { index: u64, bound: u64 },
    #[error("a must be nonzero")]
    ZeroA,
    #[error("invalid dimension: {0}")]
    Dimension(String),
    #[error("spec is degenerate: {0}")]
    Degenerate(String),
    #[error("enumeration of {count} subspaces (estimated cost {cost}) exceeds budget {budget}")]
    BudgetExceeded { count: u128, cost: u128, budget: u128 },
    #[error("{0}")]
    Unavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
