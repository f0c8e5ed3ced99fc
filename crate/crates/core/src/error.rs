use crate::words::Word;

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("duplicate event name `{0}`")]
    DuplicateEvent(String),
    #[error("invalid event name `{0}`: names must be non-empty printable tokens without whitespace or commas")]
    InvalidEventName(String),
    #[error("event `{name}` has conflicting controllability flags")]
    FlagConflict { name: String },
    #[error("projection target event `{0}` is not in the source alphabet")]
    TargetNotInSource(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("determinization cap of {cap} subset states exceeded")]
    DeterminizationCap { cap: usize },
    #[error("word bound {bound} exceeds the maximum of {max}")]
    BoundTooLarge { bound: usize, max: usize },
    #[error("word sample limit of {limit} exceeded")]
    SampleLimit { limit: usize },
    #[error("specification is not a sublanguage of the plant: `{witness}` is in the specification closure but not in the plant")]
    SpecNotSublanguage { witness: Word },
    #[error("candidate pool of {pool} events exceeds the exact-search limit of {limit}; use the greedy extension instead")]
    PoolTooLarge { pool: usize, limit: usize },
    #[error("invalid set-cover instance: {0}")]
    InvalidInstance(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("operation cancelled")]
    Cancelled,
}

impl Error {
    /// True for errors caused by hitting a configurable resource limit
    /// rather than by malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::DeterminizationCap { .. }
                | Error::BoundTooLarge { .. }
                | Error::SampleLimit { .. }
                | Error::PoolTooLarge { .. }
                | Error::Cancelled
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
