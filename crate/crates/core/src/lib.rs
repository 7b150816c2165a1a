//! Bézier dual mortaring for multi-patch isogeometric analysis.
//!
//! The spline, projection and coupling algebra is generic over [`Scalar`] and
//! runs in `f64`, `f32` or exact [`Rational64`] / [`BigRational`] arithmetic. Geometry,
//! assembly and the benchmarks work in `f64`.

// `!(a > b)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod mortar;
pub mod projection;
pub mod quadrature;
pub mod scalar;
pub mod spline;
pub mod weak;

pub use error::{Error, Result};
pub use num_rational::{BigRational, Rational64};
pub use scalar::Scalar;

pub type KnotVectorF64 = spline::KnotVector<f64>;
pub type ExactKnotVector = spline::KnotVector<Rational64>;
pub type BernsteinBasisF64 = spline::BernsteinBasis<f64>;
pub type ExactBernsteinBasis = spline::BernsteinBasis<Rational64>;
pub type DualBasisF64 = projection::DualBasis<f64>;
pub type ExactDualBasis = projection::DualBasis<Rational64>;
pub type MatrixF64 = linalg::Matrix<f64>;
pub type ExactMatrix = linalg::Matrix<Rational64>;
pub type BigExactKnotVector = spline::KnotVector<BigRational>;
pub type BigExactDualBasis = projection::DualBasis<BigRational>;
pub type BigExactMatrix = linalg::Matrix<BigRational>;
pub type AffineMapF64 = mortar::AffineMap<f64>;
pub type ExactAffineMap = mortar::AffineMap<Rational64>;
