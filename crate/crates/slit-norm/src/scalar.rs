//! Floating-point scalar abstraction for length computations.
//!
//! Combinatorial decisions (visibility, Farey parents, classification) are
//! always made in exact rational arithmetic; only lengths are evaluated in
//! floating point, generically over [`Float`].

use std::fmt;

/// Scalar type used for lengths: `f32` or `f64`.
pub trait Float:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`.
    fn from_f64_lossy(x: f64) -> Self {
        num_traits::FromPrimitive::from_f64(x).expect("finite f64 converts to any Float")
    }

    /// Widening conversion to `f64`.
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("Float converts to f64")
    }
}

impl Float for f32 {}
impl Float for f64 {}

/// Euclidean norm of an integer vector, evaluated in `F`.
pub fn hypot_int<F: Float>(m: i64, n: i64) -> F {
    F::from_f64_lossy((m as f64).hypot(n as f64))
}
