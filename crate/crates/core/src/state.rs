//! Dense statevector simulation.
//!
//! Qubit 0 is the most significant bit of the basis index, so the state
//! `|q0 q1 ... q(n-1)>` lives at index `q0 q1 ... q(n-1)` read as binary.
//! Every operation returns a new state; measured qubits are projected out
//! of the returned post-measurement state.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AqsError, Result};
use crate::gate::SingleQubitGate;
use crate::scalar::{cis, Real};

/// A single-qubit pure state `a|0> + b|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qubit<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
}

impl<T: Real> Qubit<T> {
    /// Checked constructor; the pair must be normalized within [`Real::norm_tolerance`].
    pub fn new(a: Complex<T>, b: Complex<T>) -> Result<Self> {
        let q = Self { a, b };
        let n = q.norm_sqr();
        if (n - T::one()).abs() > T::norm_tolerance() {
            return Err(AqsError::NotNormalized { norm_sqr: n.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(q)
    }

    pub fn zero() -> Self {
        Self { a: Complex::new(T::one(), T::zero()), b: Complex::new(T::zero(), T::zero()) }
    }

    pub fn one() -> Self {
        Self { a: Complex::new(T::zero(), T::zero()), b: Complex::new(T::one(), T::zero()) }
    }

    pub fn plus() -> Self {
        let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        Self { a: h, b: h }
    }

    pub fn minus() -> Self {
        let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        Self { a: h, b: -h }
    }

    pub fn norm_sqr(&self) -> T {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

/// Uniformly (Haar) random pure qubit.
///
/// `|a|^2` is uniform on `[0, 1)` and the relative phase uniform on the
/// circle, which is the uniform measure on the Bloch sphere.
pub fn haar_random_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Qubit<T> {
    let u = T::sample_unit(rng);
    let phi = T::sample_unit(rng) * T::TAU();
    let a = Complex::new(u.sqrt(), T::zero());
    let b = cis(phi) * Complex::new((T::one() - u).sqrt(), T::zero());
    Qubit { a, b }
}

/// One of the four Bell states.
///
/// Two-bit encoding: bit 0 selects the family (0 = Phi, 1 = Psi) and
/// bit 1 the sign (0 = +, 1 = -).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] =
        [BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus, BellOutcome::PsiMinus];

    pub fn from_bits(bits: u8) -> Self {
        match bits & 3 {
            0b00 => Self::PhiPlus,
            0b01 => Self::PsiPlus,
            0b10 => Self::PhiMinus,
            _ => Self::PsiMinus,
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            Self::PhiPlus => 0b00,
            Self::PsiPlus => 0b01,
            Self::PhiMinus => 0b10,
            Self::PsiMinus => 0b11,
        }
    }

    /// Bit 0: Psi family.
    pub fn is_psi(self) -> bool {
        self.bits() & 1 == 1
    }

    /// Bit 1: minus sign.
    pub fn is_minus(self) -> bool {
        self.bits() & 2 == 2
    }

    /// Phi+ <-> Psi+, Phi- <-> Psi-.
    pub fn flip_family(self) -> Self {
        Self::from_bits(self.bits() ^ 1)
    }

    /// Phi+ <-> Phi-, Psi+ <-> Psi-.
    pub fn flip_sign(self) -> Self {
        Self::from_bits(self.bits() ^ 2)
    }

    /// Amplitudes of the Bell state over `|00>, |01>, |10>, |11>`.
    pub fn amplitudes<T: Real>(self) -> [T; 4] {
        let h = T::FRAC_1_SQRT_2();
        let z = T::zero();
        match self {
            Self::PhiPlus => [h, z, z, h],
            Self::PhiMinus => [h, z, z, -h],
            Self::PsiPlus => [z, h, h, z],
            Self::PsiMinus => [z, h, -h, z],
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PhiPlus => "phi+",
            Self::PhiMinus => "phi-",
            Self::PsiPlus => "psi+",
            Self::PsiMinus => "psi-",
        })
    }
}

/// Normalized pure state of `num_qubits` qubits.
#[derive(Clone, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        amps[index] = Complex::new(T::one(), T::zero());
        Self { num_qubits, amps }
    }

    pub fn zeros(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(AqsError::BadLength(len));
        }
        let state = Self { num_qubits: len.trailing_zeros() as usize, amps };
        let n = state.norm_sqr();
        if (n - T::one()).abs() > T::norm_tolerance() {
            return Err(AqsError::NotNormalized { norm_sqr: n.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(state)
    }

    /// Tensor product of single-qubit states, first entry on qubit 0.
    pub fn product(qubits: &[Qubit<T>]) -> Result<Self> {
        let mut state = Self::basis(0, 0);
        for q in qubits {
            let q = Qubit::new(q.a, q.b)?;
            state = state.tensor(&Self { num_qubits: 1, amps: vec![q.a, q.b] });
        }
        Ok(state)
    }

    /// `(|000> + |111>) / sqrt 2`.
    pub fn ghz() -> Self {
        let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 8];
        amps[0] = h;
        amps[7] = h;
        Self { num_qubits: 3, amps }
    }

    pub fn bell(outcome: BellOutcome) -> Self {
        let amps = outcome.amplitudes::<T>().iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self { num_qubits: 2, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Splits a one-qubit state into its amplitude pair.
    pub fn as_qubit(&self) -> Option<Qubit<T>> {
        (self.num_qubits == 1).then(|| Qubit { a: self.amps[0], b: self.amps[1] })
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &x in &self.amps {
            amps.extend(other.amps.iter().map(|&y| x * y));
        }
        Self { num_qubits: self.num_qubits + other.num_qubits, amps }
    }

    /// Multiplies by a unit-modulus scalar.
    pub fn with_phase(&self, phase: Complex<T>) -> Self {
        Self { num_qubits: self.num_qubits, amps: self.amps.iter().map(|&z| z * phase).collect() }
    }

    #[inline]
    fn shift(&self, q: usize) -> usize {
        self.num_qubits - 1 - q
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            Err(AqsError::QubitOutOfRange { index: q, num_qubits: self.num_qubits })
        } else {
            Ok(())
        }
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            Err(AqsError::DimensionMismatch { left: self.num_qubits, right: other.num_qubits })
        } else {
            Ok(())
        }
    }

    /// `(I ⊗ .. ⊗ gate ⊗ .. ⊗ I) |self>`.
    pub fn apply_gate(&self, gate: &SingleQubitGate<T>, target: usize) -> Result<Self> {
        self.check_index(target)?;
        let mut out = self.clone();
        out.apply_gate_in_place(gate, target);
        Ok(out)
    }

    pub(crate) fn apply_gate_in_place(&mut self, gate: &SingleQubitGate<T>, target: usize) {
        let mask = 1usize << self.shift(target);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a, b) = gate.act(self.amps[i], self.amps[i | mask]);
                self.amps[i] = a;
                self.amps[i | mask] = b;
            }
        }
    }

    /// Applies one gate per qubit, `gates[q]` on qubit `q`.
    pub fn apply_layer(&self, gates: &[SingleQubitGate<T>]) -> Result<Self> {
        if gates.len() != self.num_qubits {
            return Err(AqsError::LengthMismatch { expected: self.num_qubits, actual: gates.len() });
        }
        let mut out = self.clone();
        for (q, g) in gates.iter().enumerate() {
            out.apply_gate_in_place(g, q);
        }
        Ok(out)
    }

    /// Controlled-SWAP of qubits `a` and `b` conditioned on `control`.
    pub fn controlled_swap(&self, control: usize, a: usize, b: usize) -> Result<Self> {
        for q in [control, a, b] {
            self.check_index(q)?;
        }
        if control == a || control == b {
            return Err(AqsError::DuplicateQubit(control));
        }
        if a == b {
            return Err(AqsError::DuplicateQubit(a));
        }
        let cm = 1usize << self.shift(control);
        let am = 1usize << self.shift(a);
        let bm = 1usize << self.shift(b);
        let mut out = self.clone();
        for i in 0..self.amps.len() {
            // visit each swapped pair once, from the side with a=1, b=0
            if i & cm != 0 && i & am != 0 && i & bm == 0 {
                let j = (i & !am) | bm;
                out.amps.swap(i, j);
            }
        }
        Ok(out)
    }

    /// Reorders qubits: qubit `k` of the result is qubit `perm[k]` of `self`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        validate_permutation(perm, self.num_qubits)?;
        let n = self.num_qubits;
        let mut amps = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
        for (i, &amp) in self.amps.iter().enumerate() {
            let mut j = 0usize;
            for (k, &src) in perm.iter().enumerate() {
                let bit = (i >> (n - 1 - src)) & 1;
                j |= bit << (n - 1 - k);
            }
            amps[j] = amp;
        }
        Ok(Self { num_qubits: n, amps })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_size(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Pure-state fidelity `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// True iff `|<self|other>| >= 1 - tol`.
    pub fn equal_up_to_global_phase(&self, other: &Self, tol: T) -> Result<bool> {
        Ok(self.inner(other)?.norm() >= T::one() - tol)
    }

    /// Largest entrywise amplitude difference, no phase alignment.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_size(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(&a, &b)| (a - b).norm()).fold(T::zero(), T::max))
    }

    /// Unnormalized projections onto each Bell state of `(q1, q2)`, in
    /// [`BellOutcome::ALL`] order. Measured qubits are removed.
    pub fn bell_branches(&self, q1: usize, q2: usize) -> Result<[Vec<Complex<T>>; 4]> {
        self.check_index(q1)?;
        self.check_index(q2)?;
        if q1 == q2 {
            return Err(AqsError::DuplicateQubit(q1));
        }
        let (s1, s2) = (self.shift(q1), self.shift(q2));
        let rest_len = self.amps.len() >> 2;
        let zero = Complex::new(T::zero(), T::zero());
        let mut branches: [Vec<Complex<T>>; 4] = std::array::from_fn(|_| vec![zero; rest_len]);
        let coeffs: [[T; 4]; 4] = BellOutcome::ALL.map(|b| b.amplitudes::<T>());
        for (i, &amp) in self.amps.iter().enumerate() {
            let xy = (((i >> s1) & 1) << 1) | ((i >> s2) & 1);
            let rest = remove_bits(i, &mut [s1, s2]);
            for (branch, coeff) in branches.iter_mut().zip(&coeffs) {
                let w = coeff[xy];
                if w != T::zero() {
                    branch[rest] = branch[rest] + amp * w;
                }
            }
        }
        Ok(branches)
    }

    /// Bell-basis measurement of `(q1, q2)`; `q1` is the first qubit of the Bell pair.
    pub fn measure_bell<R: Rng + ?Sized>(&self, q1: usize, q2: usize, rng: &mut R) -> Result<(BellOutcome, Self)> {
        let branches = self.bell_branches(q1, q2)?;
        let probs: Vec<T> = branches.iter().map(|b| b.iter().map(|z| z.norm_sqr()).sum()).collect();
        let k = sample_index(&probs, rng);
        let residual = Self::renormalized(self.num_qubits - 2, branches[k].clone(), probs[k]);
        Ok((BellOutcome::ALL[k], residual))
    }

    /// Unnormalized projections onto `|+>` (index 0) and `|->` (index 1) of qubit `q`.
    pub fn x_branches(&self, q: usize) -> Result<[Vec<Complex<T>>; 2]> {
        self.check_index(q)?;
        let s = self.shift(q);
        let mask = 1usize << s;
        let h = T::FRAC_1_SQRT_2();
        let mut plus = Vec::with_capacity(self.amps.len() / 2);
        let mut minus = Vec::with_capacity(self.amps.len() / 2);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mask]);
                plus.push((a0 + a1) * h);
                minus.push((a0 - a1) * h);
            }
        }
        Ok([plus, minus])
    }

    /// X-basis measurement: bit `false` for `|+>`, `true` for `|->`.
    pub fn measure_x<R: Rng + ?Sized>(&self, q: usize, rng: &mut R) -> Result<(bool, Self)> {
        let branches = self.x_branches(q)?;
        let probs: Vec<T> = branches.iter().map(|b| b.iter().map(|z| z.norm_sqr()).sum()).collect();
        let k = sample_index(&probs, rng);
        let residual = Self::renormalized(self.num_qubits - 1, branches[k].clone(), probs[k]);
        Ok((k == 1, residual))
    }

    fn renormalized(num_qubits: usize, amps: Vec<Complex<T>>, prob: T) -> Self {
        let scale = prob.sqrt().recip();
        Self { num_qubits, amps: amps.into_iter().map(|z| z * scale).collect() }
    }
}

impl<T: fmt::Debug> fmt::Debug for StateVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector({} qubits){:?}", self.num_qubits, self.amps)
    }
}

/// Drops the bits at the given shifts and compacts the remainder.
fn remove_bits(mut index: usize, shifts: &mut [usize]) -> usize {
    shifts.sort_unstable_by(|a, b| b.cmp(a));
    for &s in shifts.iter() {
        let low = index & ((1 << s) - 1);
        index = ((index >> (s + 1)) << s) | low;
    }
    index
}

pub(crate) fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(AqsError::InvalidPermutation(format!("length {} for {n} qubits", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(AqsError::InvalidPermutation(format!("{perm:?}")));
        }
    }
    Ok(())
}

/// Samples a branch index with the given (unnormalized) weights.
/// Branches at or below [`Real::probability_floor`] are never chosen.
fn sample_index<T: Real, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> usize {
    let floor = T::probability_floor();
    let total: T = probs.iter().copied().filter(|&p| p > floor).sum();
    let u = T::sample_unit(rng) * total;
    let mut acc = T::zero();
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= floor {
            continue;
        }
        acc = acc + p;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

/// Single-shot swap test of two registers. Passes with probability `(1 + |<a|b>|^2) / 2`.
pub fn swap_test<T: Real, R: Rng + ?Sized>(a: &StateVector<T>, b: &StateVector<T>, rng: &mut R) -> Result<bool> {
    a.check_same_size(b)?;
    swap_test_joint(&a.tensor(b), rng)
}

/// Swap test on a joint state whose first half of qubits is register A and
/// second half register B. An exchange-symmetric joint state always passes.
///
/// Runs the circuit: ancilla in `|+>`, controlled swap of every register
/// qubit pair, X-basis measurement of the ancilla (`|+>` is a pass).
pub fn swap_test_joint<T: Real, R: Rng + ?Sized>(joint: &StateVector<T>, rng: &mut R) -> Result<bool> {
    let n = joint.num_qubits;
    if !n.is_multiple_of(2) {
        return Err(AqsError::DimensionMismatch { left: n / 2, right: n - n / 2 });
    }
    let m = n / 2;
    let ancilla = StateVector::product(&[Qubit::plus()])?;
    let mut state = ancilla.tensor(joint);
    for k in 0..m {
        state = state.controlled_swap(0, 1 + k, 1 + m + k)?;
    }
    let (minus, _) = state.measure_x(0, rng)?;
    Ok(!minus)
}
