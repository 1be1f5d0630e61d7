use thiserror::Error;

/// Largest enumeration bound accepted by the pair counters.
pub const X_CAP: u64 = 1_000_000_000_000;

#[derive(Debug, Error)]
pub enum SandError {
    #[error("radix must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("invalid range [{lo}, {hi}): {reason}")]
    InvalidRange {
        lo: u64,
        hi: u64,
        reason: &'static str,
    },

    #[error("bound {x} exceeds the supported cap {cap}")]
    CapExceeded { x: u64, cap: u64 },

    #[error("pair ({a}, {b}) is not ordered: need a < b")]
    UnorderedPair { a: u64, b: u64 },

    #[error("delta {delta} is not admissible in base {base}; allowed: {allowed}")]
    InadmissibleDelta {
        delta: u64,
        base: u32,
        allowed: String,
    },

    #[error("witness rejected: {0}")]
    WitnessRejected(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("self-check failed: {0}")]
    Verification(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SandError> = std::result::Result<T, E>;
