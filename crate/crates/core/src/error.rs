use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("divisor function order must be 0, 1 or 2, got {0}")]
    SigmaOrder(u32),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("range bound {0} exceeds the supported sieve limit")]
    SieveLimit(u64),
    #[error("mean of an empty list")]
    EmptyList,
    #[error("mean requires positive entries, got {0}")]
    NonPositiveEntry(String),
    #[error("{0} requires an odd argument greater than 1, got {1}")]
    OddHypothesis(&'static str, u64),
    #[error("parity mismatch combining {0} and {1}")]
    ParityMismatch(String, String),
    #[error("conic parameter w = {conic} does not match point parameter w = {point}")]
    ParameterMismatch { conic: u64, point: u64 },
    #[error("polynomial variable lists differ")]
    VariableMismatch,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("invalid exponent pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid OEIS id {0:?}")]
    InvalidOeisId(String),
    #[error("no embedded prefix for {0}")]
    UnknownSequence(String),
    #[error("malformed b-file line {line}: {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("b-file indices not strictly increasing at line {0}")]
    NonIncreasingIndex(usize),
    #[error("fetch failed: {0}")]
    Fetch(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
