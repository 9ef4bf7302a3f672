use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the simulators and solvers are generic over.
///
/// Implemented for `f32` and `f64`. Every tolerance quoted in the docs
/// assumes `f64`; `f32` is usable for quick sweeps at proportionally
/// looser accuracy.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Largest integer that converts to this type without rounding.
    const EXACT_INT_LIMIT: u64;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn of_u64(x: u64) -> Self {
        Self::from_u64(x).expect("u64 representable")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Real for f32 {
    const EXACT_INT_LIMIT: u64 = 1 << 24;
}

impl Real for f64 {
    const EXACT_INT_LIMIT: u64 = 1 << 53;
}

/// Round half to even, the rule used when real iteration counts are snapped to integers.
pub fn round_half_even<T: Real>(x: T) -> T {
    let r = x.round();
    if (x - x.trunc()).abs() == T::of(0.5) {
        // `round` goes away from zero; pull back to the even neighbour.
        let half = r / T::two();
        if half.trunc() != half {
            return r - x.signum();
        }
    }
    r
}
