use alloc::string::String;

/// Errors raised by the geometric constructions and the bookkeeping layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A profile function violates one of the conditions it must satisfy.
    #[error("profile condition violated ({condition}) at {at}: {detail}")]
    ProfileCondition {
        condition: &'static str,
        at: f64,
        detail: String,
    },

    #[error("curve is not closed")]
    OpenCurve,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Consecutive frames of a loop are too far apart to unwrap the phase.
    #[error("frame loop needs refinement: phase jump {jump:.3} rad between frames {index} and {}", index + 1)]
    RefinementNeeded { index: usize, jump: f64 },

    /// A numerically found feature contradicts the analytic model.
    #[error("model violation: {0}")]
    ModelViolation(String),

    /// A hypothesis of the construction fails for these parameters.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A symbolic operation has no representation in the atom vocabulary.
    #[error("not representable: {0}")]
    NotRepresentable(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
