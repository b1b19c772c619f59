use thiserror::Error;

/// Errors raised by the semi-Hilbert analyses.
///
/// Variant names are stable: the CLI reports them verbatim as the `kind`
/// of its structured error object.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian: ||A - A*|| = {asymmetry:e} exceeds {bound:e}")]
    NotHermitian { asymmetry: f64, bound: f64 },
    #[error("matrix is not positive: eigenvalue {eigenvalue:e} is below {bound:e}")]
    NotPositive { eigenvalue: f64, bound: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("complex data supplied to a real space")]
    FieldMismatch,
    #[error("invalid tolerances: {0}")]
    InvalidTolerance(String),
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("base vector has zero A-seminorm")]
    DegenerateBase,
    #[error("operator is not A-bounded (it does not map N(A) into N(A))")]
    NotABounded,
    #[error("operator does not admit an A-adjoint (R(T*A) is not contained in R(A))")]
    NotAdjointable,
    #[error("A has rank zero")]
    ZeroRank,
    #[error("vector does not lie in the range of A (residual {residual:e})")]
    NotInRange { residual: f64 },
    #[error("vector is zero")]
    ZeroVector,
    #[error("directional cones require a complex space")]
    RealFieldUnsupported,
    #[error("vector {index} is not A-unit (||d||_A = {a_norm})")]
    NotAUnit { index: usize, a_norm: f64 },
    #[error("vector set is empty")]
    EmptySet,
    #[error("set is already a K_A-set, no counterexample exists")]
    AlreadyKSet,
    #[error("requested rank {rank} exceeds dimension {dim}")]
    BadRank { rank: usize, dim: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyMatrix => "EmptyMatrix",
            Error::NonSquare { .. } => "NonSquare",
            Error::NonFinite => "NonFinite",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPositive { .. } => "NotPositive",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::FieldMismatch => "FieldMismatch",
            Error::InvalidTolerance(_) => "InvalidTolerance",
            Error::InvalidDirection(_) => "InvalidDirection",
            Error::DegenerateBase => "DegenerateBase",
            Error::NotABounded => "NotABounded",
            Error::NotAdjointable => "NotAdjointable",
            Error::ZeroRank => "ZeroRank",
            Error::NotInRange { .. } => "NotInRange",
            Error::ZeroVector => "ZeroVector",
            Error::RealFieldUnsupported => "RealFieldUnsupported",
            Error::NotAUnit { .. } => "NotAUnit",
            Error::EmptySet => "EmptySet",
            Error::AlreadyKSet => "AlreadyKSet",
            Error::BadRank { .. } => "BadRank",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
