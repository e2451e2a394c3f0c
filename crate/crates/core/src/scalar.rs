use std::fmt::{Debug, Display};

use num_traits::float::TotalOrder;
use num_traits::{Float, FromPrimitive};

/// Floating point type used for distances.
///
/// Implemented for `f32` and `f64`. Geometry generators always work in `f64`
/// and the dense containers can be narrowed to `f32` when memory is tight.
pub trait Scalar:
    Float + FromPrimitive + TotalOrder + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, saturating to infinity when out of range.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(|| if v > 0.0 { Self::infinity() } else { Self::neg_infinity() })
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `max` that ignores NaN ordering issues for values known to be finite.
#[inline]
pub(crate) fn fmax<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

#[inline]
pub(crate) fn fmin<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}
