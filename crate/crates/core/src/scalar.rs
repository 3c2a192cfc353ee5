//! Numeric element types a series may carry.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Element type of a time series. Only the vector-space operations need this
/// much; window indicators require [`Real`].
pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// False for NaN and infinities; such results are stored as `?`.
    fn is_finite_scalar(self) -> bool;
}

impl Scalar for f32 {
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Ratio<i64> {
    fn is_finite_scalar(self) -> bool {
        true
    }
}

impl Scalar for Ratio<i128> {
    fn is_finite_scalar(self) -> bool {
        true
    }
}

/// Floating point scalars (f32, f64).
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

/// Convert an f64 literal (expression parameter) into the scalar type.
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).unwrap_or_else(T::zero)
}

/// Shortest decimal that round-trips to the same f64. `-0` prints as `0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x}")
}
