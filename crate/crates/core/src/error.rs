use thiserror::Error;

/// Errors raised by state, gate, processor and cascade construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QprocError {
    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("factor index {index} out of range for {count} factors")]
    FactorOutOfRange { index: usize, count: usize },

    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("control and target are both qubit {0}")]
    QubitCollision(usize),

    #[error("invalid axis {0}: expected 1, 2 or 3")]
    InvalidAxis(u8),

    #[error("invalid bipartite cut: {0}")]
    InvalidCut(String),

    #[error("gate family domain mismatch: expected {expected}, found {found}")]
    DomainMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("program factor {0} has no assignment")]
    UnassignedFactor(usize),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, QprocError>;
