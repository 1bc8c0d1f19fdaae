use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the calculus engine.
///
/// Basis indices in witnesses are 1-based, matching the key strings used by
/// model files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent at byte {0}")]
    NegativeExponent(usize),
    #[error("no value given for coordinate `{0}`")]
    MissingCoordinate(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the canonical algebroid of an empty chart has rank 0")]
    EmptyChart,
    #[error("Jacobi identity fails on basis triple ({}, {}, {}): residual {residual}", .triple[0], .triple[1], .triple[2])]
    JacobiViolation { triple: [usize; 3], residual: String },
    #[error("anchor is not a bracket morphism on basis pair ({}, {}): residual {residual}", .pair[0], .pair[1])]
    AnchorNotMorphism { pair: [usize; 2], residual: String },
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("bivector is not Poisson: [P, P] = {residual}")]
    NotPoisson { residual: String },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("wrong provenance: {0}")]
    WrongProvenance(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}
