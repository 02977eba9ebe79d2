use thiserror::Error;

/// Crate-wide error type.
///
/// Construction errors reject inputs that would break documented
/// invariants (unit norm, symmetry, pointedness, orthogonality);
/// runtime errors report degenerate geometry or exhausted samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite entry in {context}")]
    NonFinite { context: &'static str },

    #[error("vector has zero (or numerically zero) norm")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("matrix is not orthogonal: ||Q^T Q - I||_F = {deviation:e}")]
    NotOrthogonal { deviation: f64 },

    #[error("generator set spans a line: cone is not pointed")]
    NotPointed,

    #[error("generator {index} is zero (or numerically zero)")]
    ZeroGenerator { index: usize },

    #[error("cone description has no generators")]
    NoGenerators,

    #[error("geodesic endpoints are antipodal: minimal geodesic is not unique")]
    AntipodalEndpoints,

    #[error("geodesic endpoints coincide")]
    DegenerateSegment,

    #[error("sampler exhausted {attempts} rejection attempts")]
    SamplerExhausted { attempts: usize },

    #[error("matrix does not carry the certified structure required here")]
    NotCertified,

    #[error("point is not in the cone at the given tolerance")]
    NotInCone,

    #[error("start point is not in the cone cap")]
    InfeasibleStart,

    #[error("backtracking step underflowed below 1e-16 after a zero projection")]
    StepUnderflow,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("cone class does not admit this check: {reason}")]
    UnsupportedCone { reason: &'static str },

    #[error("matrix file, line {line}, column {col}: {msg}")]
    MatrixParse { line: usize, col: usize, msg: String },

    #[error("cone file: {msg}")]
    ConeParse { msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
