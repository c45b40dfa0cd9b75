//! Scalar abstraction shared by the simulator and the analytic oracles.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar type the simulator is generic over: `f32` or `f64`.
///
/// The associated tolerances scale with the precision of the type; every
/// validation in the crate (unitarity, normalization, Kraus completeness)
/// reads them from here rather than hard-coding an `f64` epsilon.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Maximum entry-wise deviation accepted for `G†G = I` and `Σ K†K = I`.
    const UNITARY_TOL: f64;
    /// Norm below which a selected measurement branch is numerically degenerate.
    const BRANCH_FLOOR: f64;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn unitary_tol() -> Self {
        Self::lit(Self::UNITARY_TOL)
    }

    #[inline]
    fn branch_floor() -> Self {
        Self::lit(Self::BRANCH_FLOOR)
    }
}

impl Real for f64 {
    const UNITARY_TOL: f64 = 1e-10;
    const BRANCH_FLOOR: f64 = 1e-14;
}

impl Real for f32 {
    const UNITARY_TOL: f64 = 1e-5;
    const BRANCH_FLOOR: f64 = 1e-7;
}
