//! Scalar abstraction so the whole pipeline runs at f32 or f64.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;

/// Floating-point scalar driving every numeric type in this crate.
///
/// `f64` is the default throughout the experiment harness (see the aliases at
/// the crate root); `f32` is supported for callers that want it.
pub trait Scalar:
    RealField + Copy + Default + FromPrimitive + ToPrimitive + std::fmt::Display + std::fmt::LowerExp
{
    /// Lossy view as f64, for diagnostics and serialization.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_real(self) -> bool;

    /// One draw from the standard normal distribution.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// Lift an `f64` literal into the scalar type.
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal not representable in scalar type")
}

impl Scalar for f32 {
    fn is_finite_real(self) -> bool {
        self.is_finite()
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for f64 {
    fn is_finite_real(self) -> bool {
        self.is_finite()
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}
