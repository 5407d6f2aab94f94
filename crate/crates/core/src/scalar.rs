//! Scalar abstraction shared by every cost computation.
//!
//! Costs, dominance checks, fronts and ceilings are generic over [`Scalar`].
//! `f64` is the working precision; `f32` is supported for compact storage and
//! [`Rational`] gives exact arithmetic, which the test suite uses to pin
//! accumulated totals and invariance properties without rounding slack.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Exact rational scalar.
pub type Rational = Ratio<i64>;

/// Numeric type usable for cost components.
pub trait Scalar:
    Num
    + Signed
    + Copy
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// `num / den` in this scalar type. Floats round once, rationals are exact.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// False for NaN and infinities.
    fn is_finite_value(&self) -> bool;

    fn from_index(index: usize) -> Self {
        Self::from_usize(index).expect("index representable as scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Neumaier-compensated running sum.
///
/// Sums of short-decimal step costs (30 x 0.1) come out correctly rounded,
/// which keeps duplicate trajectories bitwise equal. For exact scalars the
/// compensation term stays zero.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<S> {
    sum: S,
    compensation: S,
}

impl<S: Scalar> Default for CompensatedSum<S> {
    fn default() -> Self {
        Self {
            sum: S::zero(),
            compensation: S::zero(),
        }
    }
}

impl<S: Scalar> CompensatedSum<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: S) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> S {
        self.sum + self.compensation
    }
}

impl<S: Scalar> FromIterator<S> for CompensatedSum<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}
