//! Univariate B-spline and Bernstein machinery.

pub mod bernstein;
pub mod extraction;
pub mod knots;

pub use bernstein::{bernstein_gram, bernstein_mixed_gram, bernstein_transform, transform_inverse, BernsteinBasis};
pub use extraction::{extraction_operators, ElementExtraction};
pub use knots::{KnotSpan, KnotVector};
