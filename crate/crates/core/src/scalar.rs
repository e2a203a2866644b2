//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;

/// Real field the simulator is generic over. Implemented for `f32` and `f64`.
///
/// The associated tolerances are the per-precision versions of the fixed
/// thresholds used throughout: normalization, unitarity and global-phase
/// comparison.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Allowed deviation of a squared norm from one.
    fn norm_tolerance() -> Self;

    /// Allowed deviation of `U^dagger U` from the identity, entrywise.
    fn unitary_tolerance() -> Self;

    /// Default tolerance of [`crate::StateVector::equal_up_to_global_phase`].
    fn phase_tolerance() -> Self;

    /// Branch probabilities below this are treated as exactly zero and never sampled.
    fn probability_floor() -> Self;

    /// Converts an `f64` literal. Panics only if the target cannot represent finite values.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Uniform sample from `[0, 1)`.
    #[inline]
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::lit(rng.random::<f64>())
    }
}

impl Real for f64 {
    fn norm_tolerance() -> Self {
        1e-9
    }
    fn unitary_tolerance() -> Self {
        1e-12
    }
    fn phase_tolerance() -> Self {
        1e-9
    }
    fn probability_floor() -> Self {
        1e-14
    }
}

impl Real for f32 {
    fn norm_tolerance() -> Self {
        1e-4
    }
    fn unitary_tolerance() -> Self {
        1e-5
    }
    fn phase_tolerance() -> Self {
        1e-4
    }
    fn probability_floor() -> Self {
        1e-6
    }
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}
