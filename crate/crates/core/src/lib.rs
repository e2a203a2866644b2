//! Statevector simulation of a GHZ-based arbitrated quantum signature
//! protocol, the Pauli forgeries that break it when the one-time
//! encryption is Pauli-only, and the Hadamard-conjugated `(U, V)`
//! encryption that restores detection.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the
//! `f64` aliases below are what the harness uses.

pub mod attacks;
pub mod error;
pub mod gate;
pub mod linalg;
pub mod pauli;
pub mod protocol;
pub mod qotp;
pub mod scalar;
pub mod state;
pub mod transcript;

pub use attacks::{
    attack_session, attack_with_keys, defense_detection_rate, forge_pauli, forge_with_ma, forge_with_ma_phase,
    permutation_attack, symmetric_state_demo, Attack, AttackOutcome, AttackRecord,
};
pub use error::{AqsError, Result};
pub use gate::SingleQubitGate;
pub use linalg::CMatrix;
pub use pauli::{PauliLetter, PauliString};
pub use protocol::{
    bob_prepare, bob_recover, equality_test, honest_session, initialize, reconstruct, run_honest_session, sign,
    trent_verify, CorrectionTable, GhzSession, MessageSpec, ProtocolConfig, SessionPhase, SignaturePair, TestMode,
    TransmissionBundle, TrentReport, Variant, VerificationResult,
};
pub use qotp::{
    classical_otp, decrypt, decrypt_with, encrypt, encrypt_with, rotation_op, validate_encryption_set,
    EncryptionScheme, EncryptionSetReport, KeyBits, KeyOwner, KeySchedule, SecretKey, SetViolation, TransportSchedule,
};
pub use scalar::Real;
pub use state::{haar_random_qubit, swap_test, swap_test_joint, BellOutcome, Qubit, StateVector};
pub use transcript::{Transcript, TranscriptEvent};

pub type State = StateVector<f64>;
pub type StateF32 = StateVector<f32>;
pub type Gate = SingleQubitGate<f64>;
pub type GateF32 = SingleQubitGate<f32>;
pub type Message = Qubit<f64>;
pub type Scheme = EncryptionScheme<f64>;
pub type SchemeF32 = EncryptionScheme<f32>;
pub type Config = ProtocolConfig<f64>;
pub type ConfigF32 = ProtocolConfig<f32>;
pub type Matrix = CMatrix<f64>;
