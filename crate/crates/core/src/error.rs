use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AqsError {
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude count {0} is not a power of two")]
    BadLength(usize),
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit indices must be distinct, got {0} twice")]
    DuplicateQubit(usize),
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("key too short: need {needed} bits, have {available}")]
    ScheduleTooShort { needed: usize, available: usize },
    #[error("session is in phase {found:?}, expected {expected:?}")]
    SessionPhase { expected: crate::protocol::SessionPhase, found: crate::protocol::SessionPhase },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unsupported attack target letter {0}")]
    UnsupportedTarget(char),
    #[error("bob_recover called on a rejected verdict")]
    VerdictFalse,
    #[error("malformed bundle: {0}")]
    MalformedBundle(String),
    #[error("cannot parse Pauli string: {0}")]
    PauliParse(String),
}

pub type Result<T, E = AqsError> = std::result::Result<T, E>;
