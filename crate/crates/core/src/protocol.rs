//! The three-party signing and verification protocol.
//!
//! Roles: Alice signs, Bob receives and forwards, Trent arbitrates. Each
//! message qubit consumes one GHZ triplet whose particles are held as
//! (Alice, Bob, Trent). Trent's test comes in two variants: `A` checks
//! only that the decrypted signature matches the rotated message, `B`
//! additionally rebuilds the message from his GHZ particles using the
//! classical records `m_a` and `m_b`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AqsError, Result};
use crate::pauli::{PauliLetter, PauliString};
use crate::qotp::{
    classical_otp, decrypt, decrypt_with, encrypt, encrypt_with, rotation_op, EncryptionScheme, KeyOwner, KeySchedule,
    SecretKey, TransportSchedule,
};
use crate::scalar::Real;
use crate::state::{haar_random_qubit, swap_test, BellOutcome, Qubit, StateVector};
use crate::transcript::{render_bits, render_outcomes, Transcript, TranscriptEvent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
}

/// How an equality test between two states is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMode {
    /// The expected state is known: project onto it.
    Projective,
    /// Unknown states: swap test.
    Swap,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolConfig<T> {
    pub scheme: EncryptionScheme<T>,
    pub variant: Variant,
    pub test_mode: TestMode,
    /// Swap-test repetitions per equality test; all must pass.
    pub swap_shots: usize,
}

impl<T: Real> ProtocolConfig<T> {
    pub fn new(scheme: EncryptionScheme<T>, variant: Variant, test_mode: TestMode) -> Self {
        Self { scheme, variant, test_mode, swap_shots: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SessionPhase {
    Distributed,
    AliceMeasured,
    BobMeasured,
    Consumed,
}

/// GHZ resources for one signed message, plus the event log.
///
/// Before signing each entry is a 3-qubit triplet (Alice, Bob, Trent);
/// after Alice's Bell measurement a 2-qubit (Bob, Trent) state; after Bob's
/// X measurement Trent's single particle.
#[derive(Clone, Debug)]
pub struct GhzSession<T> {
    phase: SessionPhase,
    particles: Vec<StateVector<T>>,
    transcript: Transcript,
}

impl<T: Real> GhzSession<T> {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            phase: SessionPhase::Distributed,
            particles: vec![StateVector::ghz(); num_qubits],
            transcript: Transcript::default(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.particles.len()
    }

    pub fn phase(&self) -> SessionPhase {
        self.phase
    }

    pub fn particles(&self) -> &[StateVector<T>] {
        &self.particles
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn record(&mut self, event: TranscriptEvent) {
        self.transcript.push(event);
    }

    fn expect_phase(&self, expected: SessionPhase) -> Result<()> {
        if self.phase == expected {
            Ok(())
        } else {
            Err(AqsError::SessionPhase { expected, found: self.phase })
        }
    }
}

/// A1-A2: random keys of the lengths the schedules need, and `n` GHZ triplets.
pub fn initialize<T: Real, R: Rng + ?Sized>(
    num_qubits: usize,
    rng: &mut R,
) -> Result<(SecretKey, SecretKey, GhzSession<T>)> {
    if num_qubits == 0 {
        return Err(AqsError::LengthMismatch { expected: 1, actual: 0 });
    }
    let k_at = SecretKey::random(KeyOwner::AliceTrent, KeySchedule::BITS_PER_QUBIT * num_qubits, rng);
    let k_bt = SecretKey::random(KeyOwner::BobTrent, TransportSchedule::BITS_PER_QUBIT * num_qubits, rng);
    let mut session = GhzSession::new(num_qubits);
    session.record(TranscriptEvent::Initialized { qubits: num_qubits, k_at_bits: k_at.len(), k_bt_bits: k_bt.len() });
    Ok((k_at, k_bt, session))
}

/// What Alice signs.
#[derive(Clone, Debug, PartialEq)]
pub enum MessageSpec<T> {
    /// Preparation parameters of each message qubit.
    Known(Vec<Qubit<T>>),
    /// Haar-random qubits drawn at signing time.
    RandomUnknown,
}

impl<T: Real> MessageSpec<T> {
    pub fn resolve<R: Rng + ?Sized>(&self, num_qubits: usize, rng: &mut R) -> Result<Vec<Qubit<T>>> {
        match self {
            Self::Known(qubits) if qubits.len() != num_qubits => {
                Err(AqsError::LengthMismatch { expected: num_qubits, actual: qubits.len() })
            }
            Self::Known(qubits) => Ok(qubits.clone()),
            Self::RandomUnknown => Ok((0..num_qubits).map(|_| haar_random_qubit(rng)).collect()),
        }
    }
}

/// Clear message, padded Bell record and signature state as sent to Bob.
#[derive(Clone, Debug, PartialEq)]
pub struct SignaturePair<T> {
    pub message: StateVector<T>,
    /// Alice's Bell outcomes under the classical pad of `K_AT`.
    pub m_a: Vec<BellOutcome>,
    /// `E_K(R_K |P>)`.
    pub sig: StateVector<T>,
}

impl<T: Real> SignaturePair<T> {
    pub fn num_qubits(&self) -> usize {
        self.message.num_qubits()
    }

    pub fn check_shape(&self) -> Result<()> {
        let n = self.message.num_qubits();
        if self.sig.num_qubits() != n {
            return Err(AqsError::DimensionMismatch { left: n, right: self.sig.num_qubits() });
        }
        if self.m_a.len() != n {
            return Err(AqsError::LengthMismatch { expected: n, actual: self.m_a.len() });
        }
        Ok(())
    }
}

pub(crate) fn outcomes_to_bits(outcomes: &[BellOutcome]) -> Vec<bool> {
    outcomes.iter().flat_map(|o| [o.is_psi(), o.is_minus()]).collect()
}

pub(crate) fn bits_to_outcomes(bits: &[bool]) -> Vec<BellOutcome> {
    bits.chunks_exact(2).map(|p| BellOutcome::from_bits(u8::from(p[0]) | (u8::from(p[1]) << 1))).collect()
}

/// XOR pad over the two-bit outcome encoding.
pub fn pad_outcomes(outcomes: &[BellOutcome], pad: &[bool]) -> Result<Vec<BellOutcome>> {
    Ok(bits_to_outcomes(&classical_otp(&outcomes_to_bits(outcomes), pad)?))
}

/// B1-B5. Alice prepares copies of the message from its description,
/// rotates and encrypts one, Bell-measures another against her GHZ
/// particles, and pads the outcomes.
pub fn sign<T: Real, R: Rng + ?Sized>(
    message: &MessageSpec<T>,
    k_at: &SecretKey,
    session: &mut GhzSession<T>,
    scheme: &EncryptionScheme<T>,
    rng: &mut R,
) -> Result<SignaturePair<T>> {
    session.expect_phase(SessionPhase::Distributed)?;
    let n = session.num_qubits();
    let schedule = KeySchedule::derive(k_at, n)?;
    let prep = message.resolve(n, rng)?;
    let clear = StateVector::product(&prep)?;

    let rotated = rotation_op(&schedule).apply(&clear)?;
    let sig = encrypt(&rotated, &schedule, scheme)?;

    let mut m_a = Vec::with_capacity(n);
    for (qubit, triplet) in prep.iter().zip(session.particles.iter_mut()) {
        let joint = StateVector::product(&[*qubit])?.tensor(triplet);
        let (outcome, residual) = joint.measure_bell(0, 1, rng)?;
        m_a.push(outcome);
        *triplet = residual;
    }
    let m_a = pad_outcomes(&m_a, &schedule.ma_pad)?;

    session.phase = SessionPhase::AliceMeasured;
    session.record(TranscriptEvent::Signed { m_a: render_outcomes(&m_a) });
    Ok(SignaturePair { message: clear, m_a, sig })
}

/// What Bob forwards to Trent, everything under `K_BT`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransmissionBundle<T> {
    pub m_b: Vec<bool>,
    pub m_a: Vec<BellOutcome>,
    pub message: StateVector<T>,
    pub sig: StateVector<T>,
}

/// C1. Bob measures his GHZ particles in the X basis and encrypts the lot for Trent.
///
/// The transport encryption is always Pauli-type; the configured scheme
/// only governs the signature.
pub fn bob_prepare<T: Real, R: Rng + ?Sized>(
    pair: &SignaturePair<T>,
    k_bt: &SecretKey,
    session: &mut GhzSession<T>,
    rng: &mut R,
) -> Result<TransmissionBundle<T>> {
    session.expect_phase(SessionPhase::AliceMeasured)?;
    pair.check_shape()?;
    let n = session.num_qubits();
    if pair.num_qubits() != n {
        return Err(AqsError::DimensionMismatch { left: n, right: pair.num_qubits() });
    }
    let transport = TransportSchedule::derive(k_bt, n)?;

    let mut m_b = Vec::with_capacity(n);
    for pairstate in session.particles.iter_mut() {
        let (bit, trent) = pairstate.measure_x(0, rng)?;
        m_b.push(bit);
        *pairstate = trent;
    }
    session.phase = SessionPhase::BobMeasured;
    session.record(TranscriptEvent::BobMeasured { m_b: render_bits(&m_b) });

    let pauli = EncryptionScheme::Pauli;
    Ok(TransmissionBundle {
        m_b: classical_otp(&m_b, &transport.mb_pad)?,
        m_a: pad_outcomes(&pair.m_a, &transport.ma_pad)?,
        message: encrypt_with(&pair.message, &transport.message, &pauli)?,
        sig: encrypt_with(&pair.sig, &transport.signature, &pauli)?,
    })
}

/// Pauli correction for Trent's particle after Alice's Bell outcome and Bob's X bit.
///
/// The residual on Trent's particle is `Z^(minus xor x) X^psi |P_i>` up to
/// sign, so the correction is `X^psi Z^(minus xor x)` (Z acts first).
#[derive(Clone, Copy, Debug, Default)]
pub struct CorrectionTable;

impl CorrectionTable {
    pub fn correction(outcome: BellOutcome, x_bit: bool) -> PauliString {
        PauliString::from_xz_exponents(&[(outcome.is_psi(), outcome.is_minus() ^ x_bit)])
    }

    /// All eight entries, keyed by `(outcome, x_bit)`.
    pub fn entries() -> Vec<((BellOutcome, bool), PauliString)> {
        BellOutcome::ALL.iter().flat_map(|&o| [false, true].map(move |x| ((o, x), Self::correction(o, x)))).collect()
    }

    /// Letter of the correction, ignoring phase.
    pub fn letter(outcome: BellOutcome, x_bit: bool) -> PauliLetter {
        Self::correction(outcome, x_bit).letters()[0]
    }
}

/// Applies the corrections to Trent's particles and joins them into one message state.
pub fn reconstruct<T: Real>(particles: &[StateVector<T>], m_a: &[BellOutcome], m_b: &[bool]) -> Result<StateVector<T>> {
    let n = particles.len();
    if m_a.len() != n {
        return Err(AqsError::LengthMismatch { expected: n, actual: m_a.len() });
    }
    if m_b.len() != n {
        return Err(AqsError::LengthMismatch { expected: n, actual: m_b.len() });
    }
    let mut out = StateVector::basis(0, 0);
    for ((particle, &outcome), &x) in particles.iter().zip(m_a).zip(m_b) {
        if particle.num_qubits() != 1 {
            return Err(AqsError::DimensionMismatch { left: 1, right: particle.num_qubits() });
        }
        out = out.tensor(&CorrectionTable::correction(outcome, x).apply(particle)?);
    }
    Ok(out)
}

/// Runs an equality test. Returns the verdict and its pass probability.
///
/// Projective mode measures `b` in a basis containing `a`. Swap mode runs
/// `shots` independent swap tests and passes only if all of them do.
pub fn equality_test<T: Real, R: Rng + ?Sized>(
    a: &StateVector<T>,
    b: &StateVector<T>,
    mode: TestMode,
    shots: usize,
    rng: &mut R,
) -> Result<(bool, T)> {
    let overlap = a.fidelity(b)?;
    match mode {
        TestMode::Projective => {
            let tol = T::norm_tolerance();
            let p = if overlap >= T::one() - tol {
                T::one()
            } else if overlap <= tol {
                T::zero()
            } else {
                overlap
            };
            Ok((T::sample_unit(rng) < p, p))
        }
        TestMode::Swap => {
            let single = (T::one() + overlap) / T::lit(2.0);
            let mut passed = true;
            for _ in 0..shots.max(1) {
                passed &= swap_test(a, b, rng)?;
            }
            Ok((passed, single.powi(shots.max(1) as i32)))
        }
    }
}

/// Returned to Bob in C3.
#[derive(Clone, Debug)]
pub struct ReturnedMaterials<T> {
    pub verdict: bool,
    pub message: StateVector<T>,
    pub m_a: Vec<BellOutcome>,
    pub m_b: Vec<bool>,
    pub trent_particles: Vec<StateVector<T>>,
}

/// Trent's view of one verification.
#[derive(Clone, Debug)]
pub struct TrentReport<T> {
    pub passed: bool,
    /// Probability that the tests pass given the decrypted states.
    pub pass_probability: T,
    /// `R^dagger D_K(sig)`: the message the decrypted signature vouches for.
    pub signature_attested: StateVector<T>,
    /// Variant B only: message rebuilt from Trent's GHZ particles.
    pub reconstruction: Option<StateVector<T>>,
    pub returned: ReturnedMaterials<T>,
}

/// C2-C3.
pub fn trent_verify<T: Real, R: Rng + ?Sized>(
    bundle: TransmissionBundle<T>,
    k_at: &SecretKey,
    k_bt: &SecretKey,
    session: &mut GhzSession<T>,
    config: &ProtocolConfig<T>,
    rng: &mut R,
) -> Result<TrentReport<T>> {
    session.expect_phase(SessionPhase::BobMeasured)?;
    let n = session.num_qubits();
    if bundle.m_b.len() != n
        || bundle.m_a.len() != n
        || bundle.message.num_qubits() != n
        || bundle.sig.num_qubits() != n
    {
        return Err(AqsError::MalformedBundle(format!(
            "expected {n} qubits, got m_b {}, m_a {}, message {}, sig {}",
            bundle.m_b.len(),
            bundle.m_a.len(),
            bundle.message.num_qubits(),
            bundle.sig.num_qubits()
        )));
    }
    let schedule = KeySchedule::derive(k_at, n)?;
    let transport = TransportSchedule::derive(k_bt, n)?;
    let pauli = EncryptionScheme::Pauli;

    let m_b = classical_otp(&bundle.m_b, &transport.mb_pad)?;
    let m_a = pad_outcomes(&pad_outcomes(&bundle.m_a, &transport.ma_pad)?, &schedule.ma_pad)?;
    let message = decrypt_with(&bundle.message, &transport.message, &pauli)?;
    let sig = decrypt_with(&bundle.sig, &transport.signature, &pauli)?;

    let rotation = rotation_op(&schedule);
    let r_prime = decrypt(&sig, &schedule, &config.scheme)?;
    let rotated = rotation.apply(&message)?;
    let (mut passed, mut probability) = equality_test(&rotated, &r_prime, config.test_mode, config.swap_shots, rng)?;
    let signature_attested = rotation.inverse().apply(&r_prime)?;

    let particles = std::mem::take(&mut session.particles);
    let reconstruction = match config.variant {
        Variant::A => None,
        Variant::B => {
            let rebuilt = reconstruct(&particles, &m_a, &m_b)?;
            let (ok, p) = equality_test(&rebuilt, &message, config.test_mode, config.swap_shots, rng)?;
            passed &= ok;
            probability = probability * p;
            Some(rebuilt)
        }
    };

    session.phase = SessionPhase::Consumed;
    session.record(TranscriptEvent::TrentVerdict {
        variant: config.variant,
        test_mode: config.test_mode,
        passed,
        pass_probability: probability.to_f64().unwrap_or(f64::NAN),
    });
    session.record(TranscriptEvent::Returned { verdict: passed });

    Ok(TrentReport {
        passed,
        pass_probability: probability,
        signature_attested,
        reconstruction,
        returned: ReturnedMaterials { verdict: passed, message, m_a, m_b, trent_particles: particles },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerificationResult<T> {
    pub accepted: bool,
    pub trent_test_passed: bool,
    pub bob_test_passed: bool,
    /// `|<reference|recovered>|^2`.
    pub recovered_fidelity: T,
    /// Probability that both Trent's and Bob's tests pass.
    pub pass_probability: T,
}

/// C4. Bob corrects Trent's returned particles and tests them against the
/// clear message he received. `reference` is the experiment's ground truth
/// for the fidelity diagnostic.
pub fn bob_recover<T: Real, R: Rng + ?Sized>(
    returned: &ReturnedMaterials<T>,
    reference: &StateVector<T>,
    session: &mut GhzSession<T>,
    config: &ProtocolConfig<T>,
    rng: &mut R,
) -> Result<VerificationResult<T>> {
    if !returned.verdict {
        return Err(AqsError::VerdictFalse);
    }
    let recovered = reconstruct(&returned.trent_particles, &returned.m_a, &returned.m_b)?;
    let (bob_ok, p) = equality_test(&recovered, &returned.message, config.test_mode, config.swap_shots, rng)?;
    let result = VerificationResult {
        accepted: bob_ok,
        trent_test_passed: true,
        bob_test_passed: bob_ok,
        recovered_fidelity: recovered.fidelity(reference)?,
        pass_probability: p,
    };
    session.record(TranscriptEvent::BobVerdict {
        accepted: result.accepted,
        bob_test_passed: bob_ok,
        recovered_fidelity: result.recovered_fidelity.to_f64().unwrap_or(f64::NAN),
    });
    Ok(result)
}

/// Full honest run with its transcript.
#[derive(Clone, Debug)]
pub struct HonestRun<T> {
    pub result: VerificationResult<T>,
    pub message: Vec<Qubit<T>>,
    pub transcript: Transcript,
}

pub fn honest_session<T: Real, R: Rng + ?Sized>(
    num_qubits: usize,
    message: &MessageSpec<T>,
    config: &ProtocolConfig<T>,
    rng: &mut R,
) -> Result<HonestRun<T>> {
    let (k_at, k_bt, mut session) = initialize(num_qubits, rng)?;
    let prep = message.resolve(num_qubits, rng)?;
    let reference = StateVector::product(&prep)?;
    let pair = sign(&MessageSpec::Known(prep.clone()), &k_at, &mut session, &config.scheme, rng)?;
    let bundle = bob_prepare(&pair, &k_bt, &mut session, rng)?;
    let trent = trent_verify(bundle, &k_at, &k_bt, &mut session, config, rng)?;
    let result = if trent.passed {
        let mut r = bob_recover(&trent.returned, &reference, &mut session, config, rng)?;
        r.pass_probability = r.pass_probability * trent.pass_probability;
        r
    } else {
        let recovered = reconstruct(&trent.returned.trent_particles, &trent.returned.m_a, &trent.returned.m_b)?;
        VerificationResult {
            accepted: false,
            trent_test_passed: false,
            bob_test_passed: false,
            recovered_fidelity: recovered.fidelity(&reference)?,
            pass_probability: trent.pass_probability,
        }
    };
    Ok(HonestRun { result, message: prep, transcript: session.transcript })
}

/// Honest pipeline with a Haar-random message.
pub fn run_honest_session<T: Real, R: Rng + ?Sized>(
    num_qubits: usize,
    config: &ProtocolConfig<T>,
    rng: &mut R,
) -> Result<VerificationResult<T>> {
    Ok(honest_session(num_qubits, &MessageSpec::RandomUnknown, config, rng)?.result)
}
