use thiserror::Error;

/// Errors raised by the exact engine, the representation models, the
/// quadrature and the lattice enumerator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank must be at least {min}, got {got}")]
    RankTooSmall { min: usize, got: usize },

    #[error("weight has {got} coordinates but the rank is {expected}")]
    WeightLength { expected: usize, got: usize },

    #[error("the zero weight does not define a non-trivial representation")]
    ZeroWeight,

    #[error("inadmissible bound functional: psi on the dual basis vector {index} equals {value}, which is not positive")]
    InadmissibleTheta { index: usize, value: String },

    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },

    #[error("expected a {expected}x{expected} matrix, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid representation: {0}")]
    InvalidRep(String),

    #[error("point is outside the closed positive chamber")]
    ChamberViolation,

    #[error("truncation level {level} does not contain the ball of radius {t}")]
    Truncation { level: f64, t: f64 },

    #[error("integer overflow in exact norm computation")]
    Overflow,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("node cap of {cap} exceeded")]
    NodeCap { cap: u64 },

    #[error("degenerate least-squares design: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
