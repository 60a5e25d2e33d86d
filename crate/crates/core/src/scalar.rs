//! Scalar abstraction: the whole crate is generic over the floating point type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the geometry and the solver are generic over.
///
/// `f32` works for quick experiments; every reported number in the test
/// suite uses `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for converting an `f64` literal into `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// `self` as `f64`, for diagnostics and reports.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
