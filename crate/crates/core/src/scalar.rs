//! Scalar abstraction shared by every numeric stage.
//!
//! The pipeline is written once against [`Real`] and instantiated for `f64`
//! (the default, used by all public aliases) and `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating-point type the scoring pipeline can run in.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal or table entry.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    #[inline]
    fn from_i64_lossy(x: i64) -> Self {
        Self::from_i64(x).expect("i64 representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        assert_eq!(f64::lit(0.23), 0.23);
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f32::from_usize_lossy(512), 512.0);
        assert_eq!(f64::from_i64_lossy(-3).as_f64(), -3.0);
    }
}
