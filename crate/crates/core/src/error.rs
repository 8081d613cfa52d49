use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),
    #[error("shape error: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("index {index} out of range for {n_qubits} qubits")]
    Index { index: usize, n_qubits: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("no information: Fisher matrix is zero")]
    NoInformation,
    #[error("unbounded variance: weight vector overlaps the Fisher kernel (relative overlap {overlap:.3e})")]
    UnboundedVariance { overlap: f64 },
    #[error("singular point: outcome {outcome} has vanishing probability but nonzero slope")]
    SingularPoint { outcome: usize },
    #[error("rank error: basis is singular or ill-conditioned (condition number {condition:.3e})")]
    Rank { condition: f64 },
    #[error("decomposition error: residual norm {residual:.3e} outside span")]
    Decomposition { residual: f64 },
    #[error("field structure violated: {0}")]
    StructureViolation(String),
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),
    #[error("out of scope: {0}")]
    Scope(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Shape { expected, got })
    }
}
