//! Keys, the Pauli rotation, quantum one-time encryption and the
//! encryption-set validator.
//!
//! Key layout. The signer key `K_AT` is split into three disjoint segments
//! of `2n` bits each: rotation, quantum encryption, classical pad for the
//! Bell-outcome record. Qubit `i` uses bits `2i` (X exponent) and `2i+1`
//! (Z exponent) of the rotation and encryption segments. The transport key
//! `K_BT` carries, in order: `n` pad bits for Bob's X outcomes, `2n` pad bits
//! for the (already padded) Bell record, `2n` encryption bits for the clear
//! message and `2n` for the signature.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AqsError, Result};
use crate::gate::SingleQubitGate;
use crate::linalg::CMatrix;
use crate::pauli::PauliString;
use crate::scalar::Real;
use crate::state::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KeyOwner {
    /// `K_AT`, shared by Alice and Trent.
    AliceTrent,
    /// `K_BT`, shared by Bob and Trent.
    BobTrent,
}

/// Pre-shared uniformly random key string.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretKey {
    owner: KeyOwner,
    bits: Vec<bool>,
}

impl SecretKey {
    pub fn random<R: Rng + ?Sized>(owner: KeyOwner, len: usize, rng: &mut R) -> Self {
        Self { owner, bits: (0..len).map(|_| rng.random::<bool>()).collect() }
    }

    pub fn from_bits(owner: KeyOwner, bits: Vec<bool>) -> Self {
        Self { owner, bits }
    }

    pub fn owner(&self) -> KeyOwner {
        self.owner
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Big-endian hex, zero-padded to whole bytes.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(8)
            .map(|chunk| {
                let byte = chunk.iter().enumerate().fold(0u8, |acc, (k, &b)| acc | (u8::from(b) << (7 - k)));
                format!("{byte:02x}")
            })
            .collect()
    }

    fn segment(&self, start: usize, len: usize) -> Result<&[bool]> {
        self.bits
            .get(start..start + len)
            .ok_or(AqsError::ScheduleTooShort { needed: start + len, available: self.bits.len() })
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SecretKey({:?}, {} bits)", self.owner, self.bits.len())
    }
}

/// Exponents of `X^x Z^z` for one qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyBits {
    pub x: bool,
    pub z: bool,
}

impl KeyBits {
    pub const ALL: [KeyBits; 4] = [
        KeyBits { x: false, z: false },
        KeyBits { x: true, z: false },
        KeyBits { x: false, z: true },
        KeyBits { x: true, z: true },
    ];

    pub fn new(x: bool, z: bool) -> Self {
        Self { x, z }
    }
}

fn pairs(bits: &[bool]) -> Vec<KeyBits> {
    bits.chunks_exact(2).map(|p| KeyBits::new(p[0], p[1])).collect()
}

/// Per-qubit sub-keys derived from `K_AT`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySchedule {
    pub rotation: Vec<KeyBits>,
    pub encryption: Vec<KeyBits>,
    pub ma_pad: Vec<bool>,
}

impl KeySchedule {
    pub const BITS_PER_QUBIT: usize = 6;

    pub fn derive(key: &SecretKey, num_qubits: usize) -> Result<Self> {
        let seg = 2 * num_qubits;
        if key.len() < Self::BITS_PER_QUBIT * num_qubits {
            return Err(AqsError::ScheduleTooShort { needed: Self::BITS_PER_QUBIT * num_qubits, available: key.len() });
        }
        Ok(Self {
            rotation: pairs(key.segment(0, seg)?),
            encryption: pairs(key.segment(seg, seg)?),
            ma_pad: key.segment(2 * seg, seg)?.to_vec(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.rotation.len()
    }
}

/// Per-qubit sub-keys derived from `K_BT`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportSchedule {
    pub mb_pad: Vec<bool>,
    pub ma_pad: Vec<bool>,
    pub message: Vec<KeyBits>,
    pub signature: Vec<KeyBits>,
}

impl TransportSchedule {
    pub const BITS_PER_QUBIT: usize = 7;

    pub fn derive(key: &SecretKey, num_qubits: usize) -> Result<Self> {
        let n = num_qubits;
        if key.len() < Self::BITS_PER_QUBIT * n {
            return Err(AqsError::ScheduleTooShort { needed: Self::BITS_PER_QUBIT * n, available: key.len() });
        }
        Ok(Self {
            mb_pad: key.segment(0, n)?.to_vec(),
            ma_pad: key.segment(n, 2 * n)?.to_vec(),
            message: pairs(key.segment(3 * n, 2 * n)?),
            signature: pairs(key.segment(5 * n, 2 * n)?),
        })
    }
}

/// The random rotation: `X^{r1} Z^{r2}` on each qubit.
pub fn rotation_op(schedule: &KeySchedule) -> PauliString {
    let bits: Vec<(bool, bool)> = schedule.rotation.iter().map(|k| (k.x, k.z)).collect();
    PauliString::from_xz_exponents(&bits)
}

/// Quantum one-time encryption family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EncryptionScheme<T> {
    /// `X^{e1} Z^{e2}` per qubit.
    Pauli,
    /// `U X^{e1} Z^{e2} V` per qubit for fixed public unitaries.
    UV { u: SingleQubitGate<T>, v: SingleQubitGate<T> },
}

impl<T: Real> EncryptionScheme<T> {
    /// The hardened `(I, H)` instance.
    pub fn ih() -> Self {
        Self::UV { u: SingleQubitGate::identity(), v: SingleQubitGate::hadamard() }
    }

    /// Single-qubit encryption operator for one key pair.
    pub fn operator(&self, key: KeyBits) -> SingleQubitGate<T> {
        let mut pauli = SingleQubitGate::identity();
        if key.z {
            pauli = SingleQubitGate::pauli_z().then_after(&pauli);
        }
        if key.x {
            pauli = SingleQubitGate::pauli_x().then_after(&pauli);
        }
        match self {
            Self::Pauli => pauli,
            Self::UV { u, v } => u.then_after(&pauli.then_after(v)),
        }
    }

    /// The four operators indexed by key pair, in [`KeyBits::ALL`] order.
    pub fn operator_set(&self) -> Vec<CMatrix<T>> {
        KeyBits::ALL.iter().map(|&k| self.operator(k).to_matrix()).collect()
    }
}

fn check_keys(keys: &[KeyBits], num_qubits: usize) -> Result<()> {
    if keys.len() < num_qubits {
        Err(AqsError::ScheduleTooShort { needed: 2 * num_qubits, available: 2 * keys.len() })
    } else {
        Ok(())
    }
}

/// Encrypts qubit `i` with `keys[i]`.
pub fn encrypt_with<T: Real>(
    state: &StateVector<T>,
    keys: &[KeyBits],
    scheme: &EncryptionScheme<T>,
) -> Result<StateVector<T>> {
    check_keys(keys, state.num_qubits())?;
    let gates: Vec<_> = keys[..state.num_qubits()].iter().map(|&k| scheme.operator(k)).collect();
    state.apply_layer(&gates)
}

/// Exact inverse of [`encrypt_with`].
pub fn decrypt_with<T: Real>(
    state: &StateVector<T>,
    keys: &[KeyBits],
    scheme: &EncryptionScheme<T>,
) -> Result<StateVector<T>> {
    check_keys(keys, state.num_qubits())?;
    let gates: Vec<_> = keys[..state.num_qubits()].iter().map(|&k| scheme.operator(k).adjoint()).collect();
    state.apply_layer(&gates)
}

/// Signature encryption under the encryption segment of `K_AT`.
pub fn encrypt<T: Real>(
    state: &StateVector<T>,
    schedule: &KeySchedule,
    scheme: &EncryptionScheme<T>,
) -> Result<StateVector<T>> {
    encrypt_with(state, &schedule.encryption, scheme)
}

pub fn decrypt<T: Real>(
    state: &StateVector<T>,
    schedule: &KeySchedule,
    scheme: &EncryptionScheme<T>,
) -> Result<StateVector<T>> {
    decrypt_with(state, &schedule.encryption, scheme)
}

/// Bitwise XOR pad.
pub fn classical_otp(bits: &[bool], keystream: &[bool]) -> Result<Vec<bool>> {
    if bits.len() != keystream.len() {
        return Err(AqsError::LengthMismatch { expected: bits.len(), actual: keystream.len() });
    }
    Ok(bits.iter().zip(keystream).map(|(a, b)| a ^ b).collect())
}

/// Reason an operator family fails to be a quantum encryption set.
#[derive(Clone, Debug, PartialEq)]
pub enum SetViolation {
    /// Operator and probability lists differ in length.
    LengthMismatch {
        operators: usize,
        probabilities: usize,
    },
    WrongCount {
        expected: usize,
        actual: usize,
    },
    DimensionMismatch {
        index: usize,
        dim: usize,
    },
    NotUnitary {
        index: usize,
    },
    UnequalProbabilities,
    ProbabilitySum {
        sum: f64,
    },
    NotOrthogonal {
        j: usize,
        k: usize,
        trace_re: f64,
        trace_im: f64,
    },
}

impl fmt::Display for SetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { operators, probabilities } => {
                write!(f, "{operators} operators but {probabilities} probabilities")
            }
            Self::WrongCount { expected, actual } => {
                write!(f, "set has {actual} elements, an orthonormal basis needs {expected}")
            }
            Self::DimensionMismatch { index, dim } => write!(f, "operator {index} has dimension {dim}"),
            Self::NotUnitary { index } => write!(f, "operator {index} is not unitary"),
            Self::UnequalProbabilities => f.write_str("probabilities are not all equal"),
            Self::ProbabilitySum { sum } => write!(f, "probabilities sum to {sum}"),
            Self::NotOrthogonal { j, k, trace_re, trace_im } => {
                write!(f, "Tr(U{j}^dagger U{k}) = {trace_re}{trace_im:+}i")
            }
        }
    }
}

/// Outcome of [`validate_encryption_set`].
#[derive(Clone, Debug)]
pub struct EncryptionSetReport<T> {
    pub valid: bool,
    pub dimension: usize,
    pub violations: Vec<SetViolation>,
    /// Pairwise Hilbert-Schmidt products `Tr(U_j^dagger U_k)`; empty if dimensions disagree.
    pub gram: Vec<Vec<num_complex::Complex<T>>>,
}

/// Checks that `{p_k, U_k}` is a quantum encryption set: `d^2` unitaries,
/// pairwise `Tr(U_j^dagger U_k) = d delta_jk`, all probabilities equal and
/// summing to one.
pub fn validate_encryption_set<T: Real>(operators: &[CMatrix<T>], probabilities: &[T]) -> EncryptionSetReport<T> {
    let tol = T::norm_tolerance();
    let mut violations = Vec::new();
    let dim = operators.first().map_or(0, CMatrix::dim);

    if operators.len() != probabilities.len() {
        violations
            .push(SetViolation::LengthMismatch { operators: operators.len(), probabilities: probabilities.len() });
    }
    if operators.len() != dim * dim || dim == 0 {
        violations.push(SetViolation::WrongCount { expected: dim * dim, actual: operators.len() });
    }

    let mut same_dim = true;
    for (index, op) in operators.iter().enumerate() {
        if op.dim() != dim {
            same_dim = false;
            violations.push(SetViolation::DimensionMismatch { index, dim: op.dim() });
        } else if !op.is_unitary(tol) {
            violations.push(SetViolation::NotUnitary { index });
        }
    }

    if let Some(&first) = probabilities.first() {
        if probabilities.iter().any(|&p| (p - first).abs() > tol) {
            violations.push(SetViolation::UnequalProbabilities);
        }
    }
    let sum: T = probabilities.iter().copied().sum();
    if (sum - T::one()).abs() > tol {
        violations.push(SetViolation::ProbabilitySum { sum: sum.to_f64().unwrap_or(f64::NAN) });
    }

    let mut gram = Vec::new();
    if same_dim {
        let d = T::lit(dim as f64);
        for (j, a) in operators.iter().enumerate() {
            let mut row = Vec::with_capacity(operators.len());
            for (k, b) in operators.iter().enumerate() {
                let tr = a.hs_inner(b);
                let target = if j == k { d } else { T::zero() };
                if (tr - num_complex::Complex::new(target, T::zero())).norm() > tol {
                    violations.push(SetViolation::NotOrthogonal {
                        j,
                        k,
                        trace_re: tr.re.to_f64().unwrap_or(f64::NAN),
                        trace_im: tr.im.to_f64().unwrap_or(f64::NAN),
                    });
                }
                row.push(tr);
            }
            gram.push(row);
        }
    }

    EncryptionSetReport { valid: violations.is_empty(), dimension: dim, violations, gram }
}
