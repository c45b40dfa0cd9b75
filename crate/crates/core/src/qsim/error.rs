use thiserror::Error;

/// Errors raised by the circuit simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("qubit {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit {0} appears more than once in a single operation")]
    DuplicateTarget(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max |G†G - I| = {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("Kraus operators are not trace preserving (max |ΣK†K - I| = {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("unsupported operator arity {0}; only 1- and 2-qubit operators are allowed")]
    UnsupportedArity(usize),

    #[error("register of {0} qubits exceeds the supported maximum of {max}", max = super::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("selected measurement branch has numerically vanishing norm {norm:e}")]
    NumericDegeneracy { norm: f64 },

    #[error("basis change acts on qubit {0}, which is not a measurement target")]
    BasisChangeOutsideTargets(usize),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
}

pub type SimResult<T> = Result<T, SimError>;
