use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// The variant names double as the stable error codes reported by the CLI
/// (see [`Error::code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid-argument: {0}")]
    InvalidArgument(String),
    #[error("malformed-ring: {0}")]
    MalformedRing(String),
    #[error("not-invertible: {0}")]
    NotInvertible(String),
    #[error("non-nilpotent-exponent: {0}")]
    NonNilpotentExponent(String),
    #[error("empty-quotient: theta {theta} is not in the cone spanned by the charge rows")]
    EmptyQuotient { theta: String },
    #[error("condition-star-violated: rows {subset:?} {reason}")]
    ConditionStarViolated { subset: Vec<usize>, reason: String },
    #[error("non-projective: {0}")]
    NonProjective(String),
    #[error("non-convex-twist: summand {summand} pairs to {pairing} with beta {beta:?}")]
    NonConvexTwist {
        beta: Vec<i64>,
        summand: usize,
        pairing: i64,
    },
    #[error("no-divisor-lift: {0}")]
    NoDivisorLift(String),
    #[error("saturated-truncation: elimination stopped at {0}")]
    SaturatedTruncation(String),
    #[error("insufficient-truncation: {0}")]
    InsufficientTruncation(String),
    #[error("internal-inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration: {0}")]
    Configuration(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Short kebab-case code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::MalformedRing(_) => "malformed-ring",
            Error::NotInvertible(_) => "not-invertible",
            Error::NonNilpotentExponent(_) => "non-nilpotent-exponent",
            Error::EmptyQuotient { .. } => "empty-quotient",
            Error::ConditionStarViolated { .. } => "condition-star-violated",
            Error::NonProjective(_) => "non-projective",
            Error::NonConvexTwist { .. } => "non-convex-twist",
            Error::NoDivisorLift(_) => "no-divisor-lift",
            Error::SaturatedTruncation(_) => "saturated-truncation",
            Error::InsufficientTruncation(_) => "insufficient-truncation",
            Error::InternalInconsistency(_) => "internal-inconsistency",
            Error::Unsupported(_) => "unsupported",
            Error::Configuration(_) => "configuration",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
