//! Single-qubit unitaries.

use std::fmt;

use num_complex::Complex;

use crate::error::{AqsError, Result};
use crate::linalg::CMatrix;
use crate::scalar::{c, cis, Real};

/// A 2x2 unitary, `m[row][col]`.
#[derive(Clone, Copy, PartialEq)]
pub struct SingleQubitGate<T> {
    m: [[Complex<T>; 2]; 2],
}

impl<T: Real> SingleQubitGate<T> {
    /// Checked constructor; rejects matrices that are not unitary to [`Real::unitary_tolerance`].
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let gate = Self { m };
        if gate.is_unitary(T::unitary_tolerance()) {
            Ok(gate)
        } else {
            Err(AqsError::NotUnitary)
        }
    }

    const fn raw(m: [[Complex<T>; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self::raw([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]])
    }

    pub fn pauli_x() -> Self {
        Self::raw([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
    }

    pub fn pauli_y() -> Self {
        Self::raw([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
    }

    pub fn pauli_z() -> Self {
        Self::raw([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::raw([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]])
    }

    /// Phase gate `diag(1, i)`.
    pub fn s() -> Self {
        Self::raw([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
    }

    /// `diag(1, e^{i pi/4})`.
    pub fn t() -> Self {
        Self::raw([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), cis(T::FRAC_PI_4())]])
    }

    /// General `U(2)` element `e^{i alpha} [[e^{i beta} cos theta, e^{i gamma} sin theta], [-e^{-i gamma} sin theta, e^{-i beta} cos theta]]`.
    pub fn from_angles(alpha: T, beta: T, gamma: T, theta: T) -> Self {
        let g = cis(alpha);
        let (s, co) = theta.sin_cos();
        let re = |x: T| Complex::new(x, T::zero());
        Self::raw([
            [g * cis(beta) * re(co), g * cis(gamma) * re(s)],
            [-g * cis(-gamma) * re(s), g * cis(-beta) * re(co)],
        ])
    }

    /// Looks up a gate by its conventional name (`I X Y Z H S T`, case-insensitive).
    pub fn named(name: &str) -> Option<Self> {
        Some(match name.to_ascii_uppercase().as_str() {
            "I" => Self::identity(),
            "X" => Self::pauli_x(),
            "Y" => Self::pauli_y(),
            "Z" => Self::pauli_z(),
            "H" => Self::hadamard(),
            "S" => Self::s(),
            "T" => Self::t(),
            _ => return None,
        })
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.m[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::raw([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Matrix product `self * rhs` (`rhs` acts first).
    pub fn then_after(&self, rhs: &Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][col] + a[r][1] * b[1][col];
            }
        }
        Self::raw(out)
    }

    pub fn scaled(&self, phase: Complex<T>) -> Self {
        let m = &self.m;
        Self::raw([[m[0][0] * phase, m[0][1] * phase], [m[1][0] * phase, m[1][1] * phase]])
    }

    /// Action on a single-qubit amplitude pair.
    #[inline]
    pub fn act(&self, a: Complex<T>, b: Complex<T>) -> (Complex<T>, Complex<T>) {
        (self.m[0][0] * a + self.m[0][1] * b, self.m[1][0] * a + self.m[1][1] * b)
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.to_matrix().is_unitary(tol)
    }

    pub fn to_matrix(&self) -> CMatrix<T> {
        CMatrix::from_rows(vec![self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]]).expect("2x2")
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.to_matrix().max_abs_diff(&other.to_matrix())
    }
}

impl<T: fmt::Debug> fmt::Debug for SingleQubitGate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}
