use thiserror::Error;

/// Errors raised by the algebraic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("all input forms are zero")]
    AllZero,
    #[error("bundle has rank zero")]
    ZeroRank,
    #[error("cover of degree {degree} over genus {genus} has non-integral genus")]
    InvalidCover { genus: u64, degree: u64 },
    #[error("entry ({row}, {col}) should have degree {expected} but has degree {found}")]
    DegreeMismatch {
        row: usize,
        col: usize,
        expected: i64,
        found: i64,
    },
    #[error("matrix shape {rows}x{cols} does not match the declared bundles")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("Kodaira-Spencer matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unsupported field F_{p}^{m}: {reason}")]
    UnsupportedField { p: u64, m: u32, reason: String },
    #[error("element {value} is out of range for a field of order {order}")]
    ElementOutOfRange { value: u64, order: u64 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("F∘V or V∘F is not zero")]
    FvNotZero,
    #[error("Dieudonné module is not of local-local type")]
    NotLocalLocal,
    #[error("morphism does not commute with the p-mappings")]
    NotEquivariant,
    #[error("restricted Lie bundle has non-trivial splitting type {0:?}")]
    NotConstant(Vec<i64>),
    #[error("subsheaf has degree {0}, expected slope zero")]
    NotSlopeZero(i64),
    #[error("subsheaf is not saturated")]
    NotSaturated,
    #[error("subsheaf is not contained in a trivial bundle")]
    NotTrivialAmbient,
    #[error("oracle matrix at step {step} is invalid: {reason}")]
    OracleDegreeMismatch { step: usize, reason: String },
    #[error("Hom-vanishing violated at step {step}: {reason}")]
    HomVanishingViolated { step: usize, reason: String },
    #[error("inconsistent family descriptor: {0}")]
    InconsistentDescriptor(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
