//! Scalar abstraction: the real field every matrix entry is built over.
//!
//! All core types are generic over a [`Scalar`]; `f64` is the default used
//! by the crate-root aliases and the CLI. `f32` works too, at reduced
//! tolerances.

use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type usable as the base field: `f32` or `f64`.
pub trait Scalar: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy {
    /// Shorthand for converting an `f64` constant into this scalar type.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }

    /// Largest finite value, for min/max folds.
    fn big() -> Self {
        <Self as nalgebra::RealField>::max_value().expect("scalar type is bounded")
    }
}

impl<T> Scalar for T where T: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy {}

/// Complex number over the chosen scalar.
pub type Cpx<T> = Complex<T>;

/// `re + i·im` with `f64` literals, converted into the target scalar.
pub fn cpx<T: Scalar>(re: f64, im: f64) -> Cpx<T> {
    Complex::new(T::of(re), T::of(im))
}
