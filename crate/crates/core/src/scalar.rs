//! Scalar abstraction for the analytic computations.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Floating-point type the analytic routines are generic over: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Serialize + Send + Sync + 'static
{
    /// Residual bound met by the fixed-point solver at this precision.
    const FIXED_POINT_TOL: Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer count.
    #[inline]
    fn count(x: u64) -> Self {
        Self::from_u64(x).expect("integer representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const FIXED_POINT_TOL: Self = 1e-12;
}

impl Real for f32 {
    const FIXED_POINT_TOL: Self = 1e-6;
}
