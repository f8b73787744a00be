use thiserror::Error;

use crate::algebra::AlgebraKind;

/// Errors raised by algebra construction, norms and the analyzers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra spec: {0}")]
    InvalidSpec(String),
    #[error("generator index {index} out of range 1..={generators}")]
    GeneratorOutOfRange { index: usize, generators: usize },
    #[error("degree {degree} exceeds truncation degree {truncation}")]
    DegreeExceedsTruncation { degree: usize, truncation: usize },
    #[error("operands belong to different algebras")]
    SpecMismatch,
    #[error("operation `{op}` is not defined for {kind:?} algebras")]
    WrongKind { op: &'static str, kind: AlgebraKind },
    #[error("pairing entry {0} is not representable in the coefficient type")]
    PairingNotRepresentable(String),
    #[error("element carries a truncated product and cannot be certified")]
    Truncated,
    #[error("expected a homogeneous element of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("matrix of size {size} exceeds the supported limit {limit}")]
    OversizeMatrix { size: usize, limit: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid norm spec: {0}")]
    InvalidNorm(String),
    #[error("operator has no spectral form (matrix is not symmetric)")]
    MissingSpectralForm,
    #[error("operator eigenvalue {0} is not positive")]
    NonPositiveEigenvalue(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("slot expansion of degree {degree} exceeds the dense limit {limit}")]
    OversizeExpansion { degree: usize, limit: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("element is not nilpotent")]
    NotNilpotent,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
