use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("field order {p}^{e} exceeds the supported maximum of {max}")]
    FieldTooLarge { p: u32, e: u32, max: u32 },
    #[error("invalid extension degree {0}")]
    BadDegree(u32),
    #[error("value {value} is not an element of GF({q})")]
    NotAnElement { value: u32, q: u32 },
    #[error("operands belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u32, u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("ambient mismatch: {0}")]
    Ambient(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("{what} cap of {cap} exceeded")]
    CapExceeded { what: &'static str, cap: u64 },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("not a storage code: {0}")]
    NotAStorageCode(String),
    #[error("no MDS code of length {n} and dimension {k} over GF({q})")]
    NoMdsCode { n: usize, k: usize, q: u32 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("linear map is not invertible")]
    NotInvertible,
    #[error("recovery failed: {0}")]
    Insufficient(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("corrupt state: {0}")]
    CorruptState(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
