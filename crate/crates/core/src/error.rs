use thiserror::Error;

/// Errors raised by field construction, parsing and the evaluation routes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{n} exceeds the table budget of {max} elements")]
    TooLarge { p: u64, n: u32, max: u64 },
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
    #[error("discrete logarithm of zero is undefined")]
    LogOfZero,
    #[error("{d} does not divide the extension degree {n}")]
    NotADivisor { d: u32, n: u32 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("non-integral value {re} + {im}i (tolerance {tol})")]
    NonIntegral { re: f64, im: f64, tol: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("function table has {got} entries, field has {expected} elements")]
    TableLength { got: usize, expected: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("wrong characteristic: {0}")]
    Characteristic(String),
    #[error("closed forms require c != 1")]
    UnitMultiplier,
    #[error("empty multiplier range")]
    EmptyRange,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
