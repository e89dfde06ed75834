use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid qubit count {n}: {reason}")]
    InvalidQubitCount { n: usize, reason: &'static str },

    #[error("dense expansion limited to {max} qubits, got {n}")]
    TooManyQubits { n: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("state has no permutation-symmetric component")]
    NoSymmetricComponent,

    #[error("matrix is not unitary with unit determinant (deviation {deviation:.3e})")]
    NotSpecialUnitary { deviation: f64 },

    #[error("local operation is singular (|det| = {det:.3e})")]
    SingularOperation { det: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("marginal has rank {rank} > 2; outside the supported family")]
    RankTooLarge { rank: usize },

    #[error("marginals are inconsistent: best fit residual {residual:.3e} exceeds {tol:.1e}")]
    InconsistentMarginals { residual: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed document: {0}")]
    Format(String),
}
