use thiserror::Error;

/// Errors raised by the linear-algebra kernel, the state layer and the protocol runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible shapes: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("subsystem shape {factors:?} does not match dimension {dim}")]
    SubsystemMismatch { factors: Vec<usize>, dim: usize },

    #[error("invalid keep set {keep:?} for {factors} factors")]
    InvalidKeep { keep: Vec<usize>, factors: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension {0} is not a power of two")]
    NotQubitDimension(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("gate acts on {arity} qubits but {targets} targets were given")]
    ArityMismatch { arity: usize, targets: usize },

    #[error("expected a {expected}-qubit state, got {actual}")]
    QubitCountMismatch { expected: usize, actual: usize },

    #[error("axis {0:?} is not a unit vector")]
    InvalidAxis([f64; 3]),

    #[error("register of {requested} qubits exceeds the budget of {limit}")]
    BudgetExceeded { requested: usize, limit: usize },

    #[error("split mismatch: k_x ({k_x}) + k_z ({k_z}) != n_total ({n_total})")]
    SplitMismatch {
        n_total: usize,
        k_x: usize,
        k_z: usize,
    },

    #[error("decision threshold {0} must lie strictly between 0 and 1/2")]
    InvalidThreshold(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
