//! Scalar abstraction: every numeric routine in this crate is generic over
//! the real floating-point type, with `f64` aliases exported at the crate
//! root.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + 'static
{
    /// Convert an `f64` constant into `Self`.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("representable f64 constant")
    }

    /// Lossy view as `f64`, for diagnostics and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + 'static
{
}

/// Conjugate exponent: 1/q + 1/q' = 1, with the pairs (1, ∞) and (∞, 1).
pub fn conjugate_exponent<F: Real>(q: F) -> F {
    let one = F::one();
    if q == one {
        F::infinity()
    } else if q.is_infinite() {
        one
    } else {
        q / (q - one)
    }
}
