//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the norm, polynomial and search code.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// assume `f64`; `f32` works but only reaches single precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits the scalar range")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}


/// `|x|^p` with the convention `0^p = 0` for `p > 0`.
#[inline]
pub(crate) fn abs_pow<T: Real>(x: T, p: T) -> T {
    let ax = x.abs();
    if ax == T::zero() {
        T::zero()
    } else {
        ax.powf(p)
    }
}

/// `sign(x)|x|^p`.
#[inline]
pub(crate) fn signed_pow<T: Real>(x: T, p: T) -> T {
    let v = abs_pow(x, p);
    if x < T::zero() {
        -v
    } else {
        v
    }
}
