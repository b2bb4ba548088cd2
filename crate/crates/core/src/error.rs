use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("qubit index {index} out of range for a {n_qubits}-qubit state")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("wrong partition: {0}")]
    WrongPartition(String),
    #[error("matrix is not unitary (max |U^dag U - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("no canonical branch reproduces the local invariants (best mismatch {mismatch:.3e})")]
    BranchResolutionFailure { mismatch: f64 },
    #[error("measure {measure} is not defined for a {n_qubits}-qubit state")]
    UnsupportedMeasureForDimension { measure: &'static str, n_qubits: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("parameters are not canonical: {0}")]
    NotCanonical(String),
    #[error("optimizer failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("coefficients are not normalized (sum |b|^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("denominator capacity {0:.3e} is zero within tolerance")]
    ZeroCapacityDenominator(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
