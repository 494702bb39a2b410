use thiserror::Error;

/// Errors shared by the whole workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("derivation index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prolongation rounds exceeded the configured bound {0}")]
    OrderBoundExceeded(usize),
    #[error("no delta-regular frame found after {0} retries")]
    DeltaRegularityNotFound(usize),
    #[error("system is not involutive")]
    NotInvolutive,
    #[error("system is not first order")]
    NotFirstOrder,
    #[error("system has zero order equations")]
    HasZeroOrderEquations,
    #[error("section order too low")]
    OrderTooLow,
    #[error("reduction order bound {0} exceeded")]
    ReductionOrderExceeded(usize),
    #[error("module has codimension {found}, expected {expected}")]
    WrongCodimension { expected: usize, found: usize },
    #[error("module is not pure (cd = {0})")]
    NotPure(usize),
    #[error("module is torsion-free; use an absolute parametrization instead")]
    NotTorsionCase,
    #[error("codimension {0} is not supported by this operation")]
    UnsupportedCodimension(usize),
    #[error("parametrization could not be certified: {0}")]
    ParametrizationNotCertified(String),
    #[error("embedding not certified: {0}")]
    EmbeddingNotCertified(String),
    #[error("ideal generator is not a monomial")]
    NotMonomial,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
