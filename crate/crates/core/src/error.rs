use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("probe set must contain at least one vector")]
    EmptyProbeSet,

    #[error("probe {index} has zero norm")]
    ZeroProbe { index: usize },

    #[error("dimension {dim} exceeds the {kind} cap of {cap}")]
    DimensionCap {
        kind: &'static str,
        dim: usize,
        cap: usize,
    },

    #[error("invalid weights: {reason}")]
    InvalidWeights { reason: String },

    #[error("invalid {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },

    #[error("{operation} is not supported for operator kind {kind}")]
    UnsupportedKind {
        operation: &'static str,
        kind: &'static str,
    },

    #[error("map is not a permutation: {reason}")]
    NotPermutation { reason: String },

    #[error("weights are not invariant under the permutation at index {index}")]
    NotMeasurePreserving { index: usize },

    #[error("operator is not contractive: norm bound {bound}")]
    NotContractive { bound: f64 },

    #[error("operator is not isometric on the given probes: defect {defect}")]
    NotIsometric { defect: f64 },

    #[error("certificate verification failed: {reason}")]
    VerificationFailed { reason: String },
}
