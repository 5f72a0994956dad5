use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight {weight} at atom {index} is not strictly positive")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("a sample space needs at least one atom")]
    EmptySpace,

    #[error("duplicate atom identifier `{0}`")]
    DuplicateAtom(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("operands live on different sample spaces")]
    SpaceMismatch,

    #[error("input has a negative component")]
    NegativeInput,

    #[error("operators are not compatible with the base operator")]
    IncompatibleOperators,

    #[error("brute force over {blocks} blocks exceeds the cap of {cap}")]
    CapExceeded { blocks: usize, cap: usize },

    #[error("vector is not constant on the blocks of V")]
    NotInRangeOfV,

    #[error("gap {gap} does not fit a window of {window} steps")]
    WindowTooSmall { gap: usize, window: usize },

    #[error("index {0} lies outside the process window")]
    IndexOutOfWindow(i64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("missing bound: {0}")]
    MissingBounds(&'static str),

    #[error("index {index} overflows the window ending at {end}")]
    WindowOverflow { index: i64, end: i64 },

    #[error("range of U is not contained in the range of V")]
    RangeNotNested,

    #[error("process has non-zero conditional mean at index {0}")]
    NonZeroConditionalMean(i64),

    #[error("operators do not form a filtration at index {0}")]
    NotAFiltration(i64),

    #[error("|theta| reaches {0}, which is not contractive")]
    ThetaNotContractive(f64),

    #[error("theta is not constant on the blocks of T")]
    ThetaNotInRangeOfT,

    #[error("argument must satisfy 0 <= theta < 1 componentwise")]
    NotContractive,

    #[error("range of V is not contained in the range of U")]
    OperatorsNotNested,

    #[error("norm {0} is not supported here")]
    UnsupportedNorm(&'static str),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("constructed certificate failed verification: {0}")]
    CertificateRejected(String),

    #[error("{what} = {value} exceeds the limit {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
