use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("requested {requested} bits exceeds the memory cap of {cap} bits")]
    MemoryCap { requested: u64, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error("operation requires a dividing-structured gap set, got `{0}`")]
    NotDividing(String),

    #[error("invalid dividing generator: {0}")]
    InvalidGenerator(String),

    #[error("floor of m*alpha still ambiguous after {refinements} refinements (m = {m})")]
    AmbiguousFloor { m: u64, refinements: u32 },

    #[error("d*alpha mod 2 straddles an even-integer boundary after {refinements} refinements (d = {d})")]
    StraddlesBoundary { d: u64, refinements: u32 },

    #[error("position {n} is outside the explicitly colored range [1..{len}]")]
    OutOfRange { n: u64, len: u64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI's structured errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MemoryCap { .. } => "memory-cap",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Parse { .. } => "parse",
            Error::NotDividing(_) => "not-dividing",
            Error::InvalidGenerator(_) => "invalid-generator",
            Error::AmbiguousFloor { .. } => "ambiguous-floor",
            Error::StraddlesBoundary { .. } => "straddles-boundary",
            Error::OutOfRange { .. } => "out-of-range",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
