use crate::scalar::FieldSpec;

/// Errors reported across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (need 2 <= p < 2^31)")]
    ModulusOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {text:?} as an element of {field}: {reason}")]
    ScalarParse {
        text: String,
        field: FieldSpec,
        reason: String,
    },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("dimension mismatch: n={0} vs n={1}")]
    DimensionMismatch(u32, u32),
    #[error("dimension {0} is too small (need n >= 3)")]
    DimensionTooSmall(u32),
    #[error("basis index ({0},{1}) is invalid (need 1 <= i < j <= n)")]
    BadBasisIndex(u32, u32),
    #[error("linear map is singular")]
    SingularMap,
    #[error("matrix has wrong shape: expected {expected}, got {got}")]
    BadShape { expected: String, got: String },
    #[error("invalid family {name}: {reason}")]
    InvalidFamily { name: String, reason: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
