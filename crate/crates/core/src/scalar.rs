use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the math kernels are generic over.
///
/// Implemented for `f32` and `f64`. The tolerance constants scale with the
/// precision of the type so that feasibility checks and the dual bisection
/// remain meaningful for both widths; all shipped tooling instantiates `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Absolute tolerance for weight-sum and budget feasibility checks.
    fn budget_tol() -> Self;

    /// Bracket width at which the dual bisection stops.
    fn dual_tol() -> Self;

    fn half() -> Self {
        Self::from_f64(0.5).unwrap()
    }

    fn two() -> Self {
        Self::from_f64(2.0).unwrap()
    }

    /// Lossy conversion from an `f64` constant.
    fn c(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }
}

impl Real for f64 {
    fn budget_tol() -> Self {
        1e-9
    }

    fn dual_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn budget_tol() -> Self {
        1e-5
    }

    fn dual_tol() -> Self {
        1e-6
    }
}
