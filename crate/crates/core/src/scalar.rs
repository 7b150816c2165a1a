//! Scalar abstraction shared by the exact and floating point code paths.

use std::fmt::{Debug, Display};

use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Field element usable by the spline algebra.
///
/// Implemented for `f32`, `f64`, `Rational64` and `BigRational`. The exact
/// types let the extraction, transform and coupling operators be checked
/// without round-off. `Rational64` is enough for small examples; its
/// denominators overflow `i64` for degree four on fine knot grids, where
/// `BigRational` is needed.
pub trait Scalar:
    Num + Signed + FromPrimitive + ToPrimitive + PartialOrd + Clone + Debug + Display + Send + Sync + 'static
{
    /// Relative pivot threshold below which a matrix is treated as singular.
    /// Zero for exact arithmetic.
    const PIVOT_TOL: f64;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer is representable")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Absolute value as `f64`, used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.abs().to_f64_lossy()
    }
}

impl Scalar for f64 {
    const PIVOT_TOL: f64 = 64.0 * f64::EPSILON;
}

impl Scalar for f32 {
    const PIVOT_TOL: f64 = 64.0 * f32::EPSILON as f64;
}

impl Scalar for Rational64 {
    const PIVOT_TOL: f64 = 0.0;
}

impl Scalar for BigRational {
    const PIVOT_TOL: f64 = 0.0;
}

/// Binomial coefficient as a scalar.
pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    T::from_int(acc)
}

/// Integer power by repeated multiplication.
pub fn powi<T: Scalar>(x: &T, n: usize) -> T {
    let mut acc = T::one();
    for _ in 0..n {
        acc = acc * x.clone();
    }
    acc
}
