use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// gcd of the generators exceeds 1, so the gap set is infinite.
    #[error("semigroup generated by {generators:?} is not cofinite in ℕ (gcd {gcd})")]
    NonCofinite { generators: Vec<u64>, gcd: u64 },

    #[error("invalid semigroup generators: {0}")]
    InvalidGenerators(String),

    /// Truncated computations at M, M+1, M+2 disagree.
    #[error("point {label}: unstable truncation at M={truncation}, dims {dims:?}")]
    UnstableTruncation {
        label: String,
        truncation: usize,
        dims: [usize; 3],
    },

    #[error("point {label}: truncation order {have} is insufficient (need {need})")]
    InsufficientTruncation {
        label: String,
        have: usize,
        need: usize,
    },

    #[error("point {0}: not a unibranch monomial parametrization")]
    NotMonomialUnibranch(String),

    #[error("mixed shapes: {0}")]
    MixedShapes(String),

    #[error("curve model is disconnected")]
    Disconnected,

    #[error("ruling {0} has no intersection count")]
    MissingCount(String),

    #[error("invalid point data: {0}")]
    InvalidPoint(String),

    #[error("invalid curve model: {0}")]
    InvalidModel(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// An internal consistency check failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code used in CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonCofinite { .. } => "NON_COFINITE",
            Error::InvalidGenerators(_) => "INVALID_GENERATORS",
            Error::UnstableTruncation { .. } => "UNSTABLE_TRUNCATION",
            Error::InsufficientTruncation { .. } => "INSUFFICIENT_TRUNCATION",
            Error::NotMonomialUnibranch(_) => "NOT_MONOMIAL_UNIBRANCH",
            Error::MixedShapes(_) => "MIXED_SHAPES",
            Error::Disconnected => "DISCONNECTED",
            Error::MissingCount(_) => "MISSING_COUNT",
            Error::InvalidPoint(_) => "INVALID_POINT",
            Error::InvalidModel(_) => "INVALID_MODEL",
            Error::Schema(_) => "SCHEMA",
            Error::OutOfRange(_) => "OUT_OF_RANGE",
            Error::Internal(_) => "INTERNAL",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
