//! Symbolic n-qubit Pauli strings with exact phase tracking.
//!
//! A string is `i^k P_0 ⊗ P_1 ⊗ ... ⊗ P_(n-1)` with `k` in `0..4`. Letter
//! `P_j` acts on qubit `j`. Internally each letter is its `(x, z)` bit pair
//! with `I = (0,0)`, `X = (1,0)`, `Z = (0,1)`, `Y = (1,1)`, and the
//! identity `Y = i X Z`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{AqsError, Result};
use crate::gate::SingleQubitGate;
use crate::scalar::Real;
use crate::state::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    #[inline]
    pub fn xz(self) -> (bool, bool) {
        match self {
            Self::I => (false, false),
            Self::X => (true, false),
            Self::Z => (false, true),
            Self::Y => (true, true),
        }
    }

    #[inline]
    pub fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Self::I,
            (true, false) => Self::X,
            (false, true) => Self::Z,
            (true, true) => Self::Y,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Self::I),
            'X' => Some(Self::X),
            'Y' => Some(Self::Y),
            'Z' => Some(Self::Z),
            _ => None,
        }
    }

    pub fn gate<T: Real>(self) -> SingleQubitGate<T> {
        match self {
            Self::I => SingleQubitGate::identity(),
            Self::X => SingleQubitGate::pauli_x(),
            Self::Y => SingleQubitGate::pauli_y(),
            Self::Z => SingleQubitGate::pauli_z(),
        }
    }

    /// `a * b = i^k * c`, returned as `(k, c)`.
    pub fn product(a: Self, b: Self) -> (u8, Self) {
        let (x1, z1) = a.xz();
        let (x2, z2) = b.xz();
        let (x3, z3) = (x1 ^ x2, z1 ^ z2);
        // i^{x1 z1} X^{x1} Z^{z1} i^{x2 z2} X^{x2} Z^{z2}
        //   = i^{x1 z1 + x2 z2 + 2 z1 x2} X^{x3} Z^{z3}
        //   = i^{x1 z1 + x2 z2 + 2 z1 x2 - x3 z3} P(x3, z3)
        let k = u8::from(x1 & z1) + u8::from(x2 & z2) + 2 * u8::from(z1 & x2) + 3 * u8::from(x3 & z3);
        (k % 4, Self::from_xz(x3, z3))
    }

    /// True iff both letters are non-identity and different.
    pub fn anticommutes(self, other: Self) -> bool {
        let (x1, z1) = self.xz();
        let (x2, z2) = other.xz();
        (x1 & z2) ^ (z1 & x2)
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// `i^phase` times a tensor product of Pauli letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: u8,
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(phase: u8, letters: Vec<PauliLetter>) -> Self {
        Self { phase: phase % 4, letters }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(0, vec![PauliLetter::I; n])
    }

    pub fn from_letters(letters: Vec<PauliLetter>) -> Self {
        Self::new(0, letters)
    }

    /// Single non-trivial letter at `position`, identity elsewhere.
    pub fn single(n: usize, position: usize, letter: PauliLetter) -> Self {
        let mut letters = vec![PauliLetter::I; n];
        letters[position] = letter;
        Self::new(0, letters)
    }

    /// `X^x Z^z` on each qubit as an operator product (Z acts first), with the phase made exact.
    pub fn from_xz_exponents(bits: &[(bool, bool)]) -> Self {
        bits.iter().fold(Self::new(0, Vec::with_capacity(bits.len())), |mut acc, &(x, z)| {
            // X Z = -i Y
            if x && z {
                acc.phase = (acc.phase + 3) % 4;
            }
            acc.letters.push(PauliLetter::from_xz(x, z));
            acc
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Exponent `k` of the prefactor `i^k`.
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    /// All letters are `I`; the phase may be anything.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self::new(phase, self.letters.clone())
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            Err(AqsError::LengthMismatch { expected: self.len(), actual: other.len() })
        } else {
            Ok(())
        }
    }

    /// Operator product `self * other` (`other` acts first).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let mut phase = self.phase + other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, c) = PauliLetter::product(a, b);
                phase += k;
                c
            })
            .collect();
        Ok(Self::new(phase % 4, letters))
    }

    /// `+1` if the strings commute, `-1` if they anticommute.
    pub fn commutation_sign(&self, other: &Self) -> Result<i8> {
        self.check_len(other)?;
        let odd = self.letters.iter().zip(&other.letters).filter(|(a, b)| a.anticommutes(**b)).count() % 2 == 1;
        Ok(if odd { -1 } else { 1 })
    }

    /// `H P H` on the chosen positions: `X <-> Z`, `Y -> -Y`.
    pub fn conjugate_by_hadamard(&self, positions: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        for &p in positions {
            let letter =
                out.letters.get_mut(p).ok_or(AqsError::QubitOutOfRange { index: p, num_qubits: self.len() })?;
            *letter = match *letter {
                PauliLetter::X => PauliLetter::Z,
                PauliLetter::Z => PauliLetter::X,
                PauliLetter::Y => {
                    out.phase = (out.phase + 2) % 4;
                    PauliLetter::Y
                }
                PauliLetter::I => PauliLetter::I,
            };
        }
        Ok(out)
    }

    /// Hadamard conjugation on every position.
    pub fn conjugate_by_hadamard_all(&self) -> Self {
        let all: Vec<usize> = (0..self.len()).collect();
        self.conjugate_by_hadamard(&all).expect("positions in range")
    }

    /// Inverse, which is also the adjoint.
    pub fn inverse(&self) -> Self {
        // letters are Hermitian involutions, so (i^k P)^-1 = i^-k P
        Self::new((4 - self.phase) % 4, self.letters.clone())
    }

    /// Per-qubit gates and the global phase factor `i^k`.
    pub fn to_gates<T: Real>(&self) -> (Vec<SingleQubitGate<T>>, Complex<T>) {
        let gates = self.letters.iter().map(|l| l.gate()).collect();
        (gates, phase_factor(self.phase))
    }

    /// Exact action on a state, including the global phase.
    pub fn apply<T: Real>(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        let (gates, phase) = self.to_gates();
        Ok(state.apply_layer(&gates)?.with_phase(phase))
    }
}

/// `i^k`.
pub fn phase_factor<T: Real>(k: u8) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    match k % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

impl fmt::Display for PauliString {
    /// `+XZ`, `+iXZY`, `-Y`, `-iZ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = AqsError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (2u8, r),
            None => (0u8, s.strip_prefix('+').unwrap_or(s)),
        };
        let (imag, rest) = match rest.strip_prefix('i') {
            Some(r) if !r.is_empty() => (1u8, r),
            _ => (0u8, rest),
        };
        let letters = rest
            .chars()
            .map(|ch| PauliLetter::from_char(ch).ok_or_else(|| AqsError::PauliParse(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(AqsError::PauliParse(s.to_string()));
        }
        Ok(Self::new(sign + imag, letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use PauliLetter::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Dense matrix of a string, built from letter matrices by Kronecker product.
    fn dense(p: &PauliString) -> CMatrix<f64> {
        let mut m = CMatrix::identity(1);
        for l in p.letters() {
            m = m.kron(&l.gate::<f64>().to_matrix());
        }
        m.scale(phase_factor(p.phase_exponent()))
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let p = ps("X").multiply(&ps("Z")).unwrap();
        assert_eq!(p, PauliString::new(3, vec![Y]));
    }

    #[test]
    fn x_times_x_is_identity() {
        assert_eq!(ps("X").multiply(&ps("X")).unwrap(), PauliString::identity(1));
    }

    #[test]
    fn two_qubit_products_match_dense_matrices() {
        let (a, b) = (ps("XZ"), ps("ZX"));
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        assert_eq!(ab.letters(), ba.letters());
        // the two anticommuting positions cancel
        assert_eq!(ab.phase_exponent(), ba.phase_exponent());
        assert!(dense(&ab).max_abs_diff(&(&dense(&a) * &dense(&b))) < 1e-15);
        assert!(dense(&ba).max_abs_diff(&(&dense(&b) * &dense(&a))) < 1e-15);
    }

    #[test]
    fn all_letter_products_match_matrices() {
        for a in PauliLetter::ALL {
            for b in PauliLetter::ALL {
                let (k, c) = PauliLetter::product(a, b);
                let lhs = &a.gate::<f64>().to_matrix() * &b.gate::<f64>().to_matrix();
                let rhs = c.gate::<f64>().to_matrix().scale(phase_factor(k));
                assert!(lhs.max_abs_diff(&rhs) < 1e-15, "{a}{b}");
            }
        }
    }

    #[test]
    fn commutation_signs() {
        assert_eq!(ps("X").commutation_sign(&ps("Z")).unwrap(), -1);
        assert_eq!(ps("X").commutation_sign(&ps("I")).unwrap(), 1);
        for a in PauliLetter::ALL {
            for b in PauliLetter::ALL {
                let expected = if a != I && b != I && a != b { -1 } else { 1 };
                let got =
                    PauliString::from_letters(vec![a]).commutation_sign(&PauliString::from_letters(vec![b])).unwrap();
                assert_eq!(got, expected, "{a}{b}");
            }
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(ps("X").multiply(&ps("XX")), Err(AqsError::LengthMismatch { .. })));
        assert!(ps("X").commutation_sign(&ps("XX")).is_err());
    }

    #[test]
    fn hadamard_conjugation_examples() {
        assert_eq!(ps("X").conjugate_by_hadamard(&[0]).unwrap(), ps("Z"));
        assert_eq!(ps("Y").conjugate_by_hadamard(&[0]).unwrap(), ps("-Y"));
        assert_eq!(ps("ZX").conjugate_by_hadamard(&[0]).unwrap(), ps("XX"));
        assert!(ps("ZX").conjugate_by_hadamard(&[2]).is_err());
    }

    #[test]
    fn hadamard_conjugation_matches_dense_conjugation() {
        let h = SingleQubitGate::<f64>::hadamard().to_matrix();
        let i2 = CMatrix::<f64>::identity(2);
        let p = ps("iZYX");
        let positions = [0usize, 1];
        let conj = p.conjugate_by_hadamard(&positions).unwrap();
        let mut hh = CMatrix::identity(1);
        for q in 0..3 {
            hh = hh.kron(if positions.contains(&q) { &h } else { &i2 });
        }
        let expected = &(&hh * &dense(&p)) * &hh;
        assert!(dense(&conj).max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn no_pauli_commutes_with_both_h_and_a_nontrivial_pauli() {
        // exact commutation with H fails for every non-identity letter
        let h = SingleQubitGate::<f64>::hadamard().to_matrix();
        for l in [X, Y, Z] {
            let m = l.gate::<f64>().to_matrix();
            let commutes_with_h = (&m * &h).max_abs_diff(&(&h * &m)) < 1e-12;
            for n in [X, Y, Z] {
                let nm = n.gate::<f64>().to_matrix();
                let commutes_with_n = (&m * &nm).max_abs_diff(&(&nm * &m)) < 1e-12;
                assert!(!(commutes_with_h && commutes_with_n), "{l} vs H and {n}");
            }
        }
    }

    #[test]
    fn display_and_parse() {
        let p = PauliString::new(1, vec![X, Z, Y]);
        assert_eq!(p.to_string(), "+iXZY");
        assert_eq!(ps("+iXZY"), p);
        assert_eq!(ps("-iZ"), PauliString::new(3, vec![Z]));
        assert_eq!(ps("XI").to_string(), "+XI");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        // a lone "I" is the identity letter, not the imaginary prefix
        assert_eq!(ps("I"), PauliString::identity(1));
    }

    #[test]
    fn from_xz_exponents_is_x_after_z() {
        let p = PauliString::from_xz_exponents(&[(true, true), (true, false), (false, true), (false, false)]);
        let x = PauliString::from_letters(vec![X, X, I, I]);
        let z = PauliString::from_letters(vec![Z, I, Z, I]);
        assert_eq!(p, x.multiply(&z).unwrap());
    }

    #[test]
    fn identity_gates_for_identity_string() {
        let (gates, phase) = PauliString::identity(3).to_gates::<f64>();
        assert!(gates.iter().all(|g| g.max_abs_diff(&SingleQubitGate::identity()) == 0.0));
        assert_eq!(phase, Complex::new(1.0, 0.0));
    }
}
