//! Floating point abstraction shared by the orbit and geometry code.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point: f32 or f64.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    /// Convergence floor for iterative solvers in this precision.
    fn solver_tolerance() -> Self;
}

impl Scalar for f32 {
    fn solver_tolerance() -> Self {
        4.0 * f32::EPSILON
    }
}

impl Scalar for f64 {
    fn solver_tolerance() -> Self {
        1e-10
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_two_pi<T: Scalar>(angle: T) -> T {
    let tau = T::TAU();
    let wrapped = angle % tau;
    let wrapped = if wrapped < T::zero() { wrapped + tau } else { wrapped };
    // `x % tau + tau` can round up to exactly tau for tiny negative x
    if wrapped >= tau {
        T::zero()
    } else {
        wrapped
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_pi<T: Scalar>(angle: T) -> T {
    wrap_two_pi(angle + T::PI()) - T::PI()
}
