use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is not prime")]
    NotPrime(u32),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty tensor product")]
    EmptyTensor,

    #[error("basis index {index} out of range for {size} elements")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("generator has a nontrivial phase at its d-th power (omega^{0})")]
    InvalidGenerator(u32),

    #[error("coefficient vector has zero norm")]
    ZeroNorm,

    #[error("invalid probe: {0}")]
    InvalidProbe(String),

    #[error("invalid process matrix: {0}")]
    InvalidChi(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("simulation of total dimension {dim} exceeds the cap of {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("configuration/record mismatch: {0}")]
    RecordMismatch(String),

    #[error("under-determined system: rank {rank} < {expected}; unresolved parameters: {}", missing.join(", "))]
    Underdetermined {
        rank: usize,
        expected: usize,
        missing: Vec<String>,
        /// Minimum-norm estimate from the resolvable subspace.
        partial: Box<crate::channels::ChiMatrix>,
    },

    #[error("channel specification: {0}")]
    Spec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
