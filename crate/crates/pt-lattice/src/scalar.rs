//! Scalar abstraction: every module in this crate is generic over the real
//! float type, so the same code runs at `f32` and `f64` precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar underlying all complex arithmetic.
///
/// Implemented for `f32` and `f64` via the blanket impl below; nothing in the
/// crate assumes a particular width beyond what these bounds provide.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant to `T`. Infallible for `f32`/`f64`.
pub(crate) fn r<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// Absolute tolerance adapted to the scalar width: the requested `f64` value,
/// floored at a small multiple of machine epsilon so gates stay meaningful at
/// reduced precision.
pub(crate) fn tol<T: Real>(base: f64) -> T {
    let b = r::<T>(base);
    let floor = T::epsilon() * r::<T>(64.0);
    if b > floor {
        b
    } else {
        floor
    }
}
