//! Forgeries against the signature pair and the defense measurements.
//!
//! The adversary is Bob (any party on the channel has the same power). He
//! holds the pair between signing and forwarding and can apply Pauli
//! operators to the quantum parts and flip bits of the padded Bell record.
//! An attack succeeds when Trent accepts and the state his verification
//! vouches for equals the adversary's intended message up to global phase.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{AqsError, Result};
use crate::pauli::{PauliLetter, PauliString};
use crate::protocol::{
    bob_prepare, initialize, sign, trent_verify, GhzSession, MessageSpec, ProtocolConfig, SignaturePair, TestMode,
    Variant,
};
use crate::qotp::{EncryptionScheme, SecretKey};
use crate::scalar::Real;
use crate::state::{swap_test_joint, validate_permutation, BellOutcome, Qubit, StateVector};
use crate::transcript::TranscriptEvent;

/// Applies `q` to both the clear message and the signature state. The Bell record is untouched.
pub fn forge_pauli<T: Real>(pair: &SignaturePair<T>, q: &PauliString) -> Result<SignaturePair<T>> {
    pair.check_shape()?;
    if q.len() != pair.num_qubits() {
        return Err(AqsError::LengthMismatch { expected: pair.num_qubits(), actual: q.len() });
    }
    Ok(SignaturePair { message: q.apply(&pair.message)?, m_a: pair.m_a.clone(), sig: q.apply(&pair.sig)? })
}

fn forge_record<T: Real>(
    pair: &SignaturePair<T>,
    targets: &[PauliLetter],
    letter: PauliLetter,
    flip: fn(BellOutcome) -> BellOutcome,
) -> Result<SignaturePair<T>> {
    pair.check_shape()?;
    if targets.len() != pair.num_qubits() {
        return Err(AqsError::LengthMismatch { expected: pair.num_qubits(), actual: targets.len() });
    }
    if let Some(bad) = targets.iter().find(|&&t| t != PauliLetter::I && t != letter) {
        return Err(AqsError::UnsupportedTarget(bad.as_char()));
    }
    // flipping a padded bit flips the same plaintext bit
    let m_a = pair.m_a.iter().zip(targets).map(|(&o, &t)| if t == letter { flip(o) } else { o }).collect();
    let q = PauliString::from_letters(targets.to_vec());
    Ok(SignaturePair { message: q.apply(&pair.message)?, m_a, sig: q.apply(&pair.sig)? })
}

/// Bell-record exchange forgery: on every qubit targeted with `X`, swap
/// Phi+ <-> Psi+ and Phi- <-> Psi- in the padded record and apply `X` to
/// message and signature. Only `I` and `X` targets are accepted.
pub fn forge_with_ma<T: Real>(pair: &SignaturePair<T>, targets: &[PauliLetter]) -> Result<SignaturePair<T>> {
    forge_record(pair, targets, PauliLetter::X, BellOutcome::flip_family)
}

/// Phase analogue of [`forge_with_ma`]: Phi+ <-> Phi-, Psi+ <-> Psi- together
/// with `Z` on targeted qubits. Only `I` and `Z` targets are accepted.
pub fn forge_with_ma_phase<T: Real>(pair: &SignaturePair<T>, targets: &[PauliLetter]) -> Result<SignaturePair<T>> {
    forge_record(pair, targets, PauliLetter::Z, BellOutcome::flip_sign)
}

/// Reorders the qubits of message, signature and record alike: new qubit
/// `k` is old qubit `perm[k]`. Key alignment stays positional.
pub fn permutation_attack<T: Real>(pair: &SignaturePair<T>, perm: &[usize]) -> Result<SignaturePair<T>> {
    pair.check_shape()?;
    validate_permutation(perm, pair.num_qubits())?;
    Ok(SignaturePair {
        message: pair.message.permute_qubits(perm)?,
        m_a: perm.iter().map(|&p| pair.m_a[p]).collect(),
        sig: pair.sig.permute_qubits(perm)?,
    })
}

/// What the adversary does between signing and forwarding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attack {
    None,
    Pauli(PauliString),
    /// Qubit indices for [`forge_with_ma`].
    MaExchange(Vec<usize>),
    /// Qubit indices for [`forge_with_ma_phase`].
    MaExchangePhase(Vec<usize>),
    Permutation(Vec<usize>),
}

fn targets(n: usize, indices: &[usize], letter: PauliLetter) -> Result<Vec<PauliLetter>> {
    let mut out = vec![PauliLetter::I; n];
    for &i in indices {
        *out.get_mut(i).ok_or(AqsError::QubitOutOfRange { index: i, num_qubits: n })? = letter;
    }
    Ok(out)
}

impl Attack {
    pub fn apply<T: Real>(&self, pair: &SignaturePair<T>) -> Result<SignaturePair<T>> {
        let n = pair.num_qubits();
        match self {
            Self::None => Ok(pair.clone()),
            Self::Pauli(q) => forge_pauli(pair, q),
            Self::MaExchange(idx) => forge_with_ma(pair, &targets(n, idx, PauliLetter::X)?),
            Self::MaExchangePhase(idx) => forge_with_ma_phase(pair, &targets(n, idx, PauliLetter::Z)?),
            Self::Permutation(perm) => permutation_attack(pair, perm),
        }
    }

    /// The message the adversary wants validated, given the original.
    pub fn intended_target<T: Real>(&self, message: &StateVector<T>) -> Result<StateVector<T>> {
        let n = message.num_qubits();
        match self {
            Self::None => Ok(message.clone()),
            Self::Pauli(q) => q.apply(message),
            Self::MaExchange(idx) => PauliString::from_letters(targets(n, idx, PauliLetter::X)?).apply(message),
            Self::MaExchangePhase(idx) => PauliString::from_letters(targets(n, idx, PauliLetter::Z)?).apply(message),
            Self::Permutation(perm) => message.permute_qubits(perm),
        }
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            Self::None => f.write_str("none"),
            Self::Pauli(q) => write!(f, "pauli:{q}"),
            Self::MaExchange(idx) => write!(f, "ma-exchange:{}", join(idx)),
            Self::MaExchangePhase(idx) => write!(f, "ma-exchange-z:{}", join(idx)),
            Self::Permutation(p) => write!(f, "permutation:{}", join(p)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AttackOutcome<T> {
    /// Trent's verdict.
    pub accepted: bool,
    pub intended_target: StateVector<T>,
    /// Variant A: the message the decrypted signature vouches for.
    /// Variant B: Trent's reconstruction from his GHZ particles.
    pub delivered: StateVector<T>,
    /// `accepted` and `delivered` equals `intended_target` up to global phase.
    pub success: bool,
    pub detection_mode: TestMode,
    /// Probability that Trent accepts, given the forged pair.
    pub pass_probability: T,
}

/// Serializable summary of an [`AttackOutcome`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackRecord {
    pub accepted: bool,
    pub success: bool,
    pub detection_mode: TestMode,
    pub pass_probability: f64,
    pub delivered_fidelity: f64,
}

impl<T: Real> AttackOutcome<T> {
    /// `|<intended|delivered>|^2`.
    pub fn delivered_fidelity(&self) -> T {
        self.intended_target.fidelity(&self.delivered).unwrap_or_else(|_| T::zero())
    }

    pub fn to_record(&self) -> AttackRecord {
        AttackRecord {
            accepted: self.accepted,
            success: self.success,
            detection_mode: self.detection_mode,
            pass_probability: self.pass_probability.to_f64().unwrap_or(f64::NAN),
            delivered_fidelity: self.delivered_fidelity().to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("attack records serialize")
    }
}

/// Runs sign, forgery, forwarding and Trent's verification with given keys and session.
pub fn attack_with_keys<T: Real, R: Rng + ?Sized>(
    k_at: &SecretKey,
    k_bt: &SecretKey,
    mut session: GhzSession<T>,
    config: &ProtocolConfig<T>,
    attack: &Attack,
    message: &[Qubit<T>],
    rng: &mut R,
) -> Result<AttackOutcome<T>> {
    let original = StateVector::product(message)?;
    let pair = sign(&MessageSpec::Known(message.to_vec()), k_at, &mut session, &config.scheme, rng)?;
    let forged = attack.apply(&pair)?;
    session.record(TranscriptEvent::Forged { attack: attack.to_string() });
    let bundle = bob_prepare(&forged, k_bt, &mut session, rng)?;
    let report = trent_verify(bundle, k_at, k_bt, &mut session, config, rng)?;

    let intended_target = attack.intended_target(&original)?;
    let delivered = match config.variant {
        Variant::A => report.signature_attested,
        Variant::B => report.reconstruction.expect("variant B reconstructs"),
    };
    let success = report.passed && delivered.equal_up_to_global_phase(&intended_target, T::phase_tolerance())?;
    Ok(AttackOutcome {
        accepted: report.passed,
        intended_target,
        delivered,
        success,
        detection_mode: config.test_mode,
        pass_probability: report.pass_probability,
    })
}

/// Full forgery experiment with fresh random keys.
pub fn attack_session<T: Real, R: Rng + ?Sized>(
    num_qubits: usize,
    config: &ProtocolConfig<T>,
    attack: &Attack,
    message: &MessageSpec<T>,
    rng: &mut R,
) -> Result<AttackOutcome<T>> {
    let (k_at, k_bt, session) = initialize(num_qubits, rng)?;
    let prep = message.resolve(num_qubits, rng)?;
    attack_with_keys(&k_at, &k_bt, session, config, attack, &prep, rng)
}

/// Fraction of `trials` in which Trent rejects `forge_pauli(q)` under the
/// `(I, H)` scheme with variant A.
pub fn defense_detection_rate<T: Real, R: Rng + ?Sized>(
    num_qubits: usize,
    q: &PauliString,
    message: &MessageSpec<T>,
    trials: usize,
    test_mode: TestMode,
    rng: &mut R,
) -> Result<T> {
    let config = ProtocolConfig::new(EncryptionScheme::ih(), Variant::A, test_mode);
    let attack = Attack::Pauli(q.clone());
    let mut detected = 0usize;
    for _ in 0..trials.max(1) {
        if !attack_session(num_qubits, &config, &attack, message, rng)?.accepted {
            detected += 1;
        }
    }
    Ok(T::lit(detected as f64) / T::lit(trials.max(1) as f64))
}

/// Empirical single-shot swap-test pass rate of a two-register joint state.
pub fn swap_pass_rate<T: Real, R: Rng + ?Sized>(joint: &StateVector<T>, shots: usize, rng: &mut R) -> Result<T> {
    let mut passed = 0usize;
    for _ in 0..shots.max(1) {
        passed += usize::from(swap_test_joint(joint, rng)?);
    }
    Ok(T::lit(passed as f64) / T::lit(shots.max(1) as f64))
}

/// `(|01> + |10>) / sqrt 2` split across two one-qubit registers: exchange
/// symmetric, entangled, and not of the form `|a>|a>`.
pub fn symmetric_joint_state<T: Real>() -> StateVector<T> {
    StateVector::bell(BellOutcome::PsiPlus)
}

/// Swap-test pass rate of [`symmetric_joint_state`].
pub fn symmetric_state_demo<T: Real, R: Rng + ?Sized>(shots: usize, rng: &mut R) -> Result<T> {
    swap_pass_rate(&symmetric_joint_state(), shots, rng)
}
