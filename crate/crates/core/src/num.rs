//! Scalar abstraction for the probability and timing arithmetic.
//!
//! Everything that manipulates probabilities or durations (noise channels,
//! subset weights, bounds) is written against [`Real`] so the same code runs
//! in `f32` or `f64`. The stabilizer machinery itself is purely binary and
//! does not depend on the scalar type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable for noise and sampling arithmetic.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal representable in scalar type")
    }

    /// Lossless-enough conversion to `f64` for reporting and RNG comparisons.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), compensation: T::zero() }
    }

    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut terms = vec![1.0f64];
        terms.extend(std::iter::repeat_n(1e-17, 1000));
        let naive: f64 = terms.iter().sum();
        let comp: CompensatedSum<f64> = terms.iter().copied().collect();
        assert_eq!(naive, 1.0);
        assert!((comp.value() - (1.0 + 1e-14)).abs() < 1e-16);
    }

    #[test]
    fn literals_round_trip_in_both_widths() {
        assert_eq!(f64::lit(0.25), 0.25);
        assert_eq!(f32::lit(0.25), 0.25f32);
        assert_eq!(0.5f32.as_f64(), 0.5);
    }
}
