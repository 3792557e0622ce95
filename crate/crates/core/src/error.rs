//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the model-space, operator, bounds, and search layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands belong to different spaces")]
    SpaceMismatch,

    #[error("coefficient length {got} does not match head dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tail presence mismatch between operands")]
    TailMismatch,

    #[error("weights must be a nonempty list of strictly positive reals")]
    InvalidWeights,

    #[error("lambda must be strictly positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("operator requires the {expected} preset")]
    WrongPreset { expected: &'static str },

    #[error("matrix payload must have head_dim^2 entries, got {got}")]
    BadMatrixShape { got: usize },

    #[error("selection is not admissible: {0}")]
    InvalidSelection(String),

    #[error("epsilon {eps} exceeds the threshold {threshold}")]
    AboveThreshold { eps: f64, threshold: f64 },

    #[error("point is not in the range box (distance {distance})")]
    NotInRangeBox { distance: f64 },

    #[error("target must have unit sup norm, got {0}")]
    TargetNotUnit(f64),

    #[error("operator kind does not support this check")]
    UnsupportedOperator,

    #[error("witness window is empty at lambda = {lambda} (needs {lo} <= t <= {hi})")]
    EmptyWitnessWindow { lambda: f64, lo: f64, hi: f64 },

    #[error("grid too small: need head_dim >= {need}, got {got}")]
    GridTooSmall { need: usize, got: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
