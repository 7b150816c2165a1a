//! Bernstein polynomials on arbitrary intervals, their Gram matrices and the
//! change-of-interval transform.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{binomial, Scalar};

/// Degree-`p` Bernstein basis on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinBasis<T> {
    lo: T,
    hi: T,
    degree: usize,
}

impl<T: Scalar> BernsteinBasis<T> {
    pub fn new(lo: T, hi: T, degree: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::DegenerateInterval { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
        }
        Ok(Self { lo, hi, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn interval(&self) -> (&T, &T) {
        (&self.lo, &self.hi)
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Local coordinate `(xi - lo) / (hi - lo)`.
    pub fn local(&self, xi: &T) -> T {
        (xi.clone() - self.lo.clone()) / (self.hi.clone() - self.lo.clone())
    }

    /// Values of all `p + 1` functions at `xi`.
    pub fn eval(&self, xi: &T) -> Result<Vec<T>> {
        if *xi < self.lo || *xi > self.hi {
            return Err(Error::OutOfDomain {
                value: xi.to_f64_lossy(),
                lo: self.lo.to_f64_lossy(),
                hi: self.hi.to_f64_lossy(),
            });
        }
        Ok(bernstein_unit(self.degree, &self.local(xi)))
    }

    /// Values and first derivatives (with respect to `xi`) at `xi`.
    pub fn eval_with_derivative(&self, xi: &T) -> Result<(Vec<T>, Vec<T>)> {
        let vals = self.eval(xi)?;
        let mut ders = bernstein_unit_derivative(self.degree, &self.local(xi));
        let inv_h = T::one() / (self.hi.clone() - self.lo.clone());
        for d in &mut ders {
            *d = d.clone() * inv_h.clone();
        }
        Ok((vals, ders))
    }
}

/// Bernstein polynomials of degree `p` on [0, 1] evaluated at `t`.
///
/// No domain check is performed, so this also extrapolates.
pub fn bernstein_unit<T: Scalar>(p: usize, t: &T) -> Vec<T> {
    let s = T::one() - t.clone();
    let mut b = vec![T::zero(); p + 1];
    b[0] = T::one();
    for k in 1..=p {
        let mut prev = T::zero();
        for bi in b.iter_mut().take(k + 1) {
            let cur = bi.clone();
            *bi = s.clone() * cur.clone() + t.clone() * prev;
            prev = cur;
        }
    }
    b
}

/// Derivatives with respect to `t` of the degree-`p` Bernstein polynomials on [0, 1].
pub fn bernstein_unit_derivative<T: Scalar>(p: usize, t: &T) -> Vec<T> {
    if p == 0 {
        return vec![T::zero()];
    }
    let lower = bernstein_unit(p - 1, t);
    let pf = T::from_int(p as i64);
    (0..=p)
        .map(|i| {
            let left = if i > 0 { lower[i - 1].clone() } else { T::zero() };
            let right = if i < p { lower[i].clone() } else { T::zero() };
            pf.clone() * (left - right)
        })
        .collect()
}

/// Gram matrix `∫ B_a B_b dξ` of the degree-`p` Bernstein basis on an interval
/// of length `h`.
pub fn bernstein_gram<T: Scalar>(p: usize, h: &T) -> Matrix<T> {
    Matrix::from_fn(p + 1, p + 1, |a, b| {
        let num: T = binomial::<T>(p, a) * binomial::<T>(p, b);
        let den: T = binomial::<T>(2 * p, a + b) * T::from_int((2 * p + 1) as i64);
        num / den * h.clone()
    })
}

/// Integrals `∫ B_a dξ = h / (p + 1)` of the Bernstein basis.
pub fn bernstein_integrals<T: Scalar>(p: usize, h: &T) -> Vec<T> {
    vec![h.clone() / T::from_int((p + 1) as i64); p + 1]
}

/// Change-of-interval transform `M` between Bernstein bases of degree `p`.
///
/// With `B` the basis on `source` and `B̃` the basis on `target`, both read at
/// the same parametric point, `B̃ = M⁻ᵀ B`, equivalently `B = Mᵀ B̃`.
/// Swapping the roles of the two intervals inverts the transform, so `M` is
/// evaluated with the closed form of [`transform_inverse`] and no matrix
/// inversion. This keeps it well conditioned when `target` is a small piece
/// of `source`.
pub fn bernstein_transform<T: Scalar>(p: usize, source: (&T, &T), target: (&T, &T)) -> Result<Matrix<T>> {
    transform_inverse(p, target, source)
}

/// The matrix `M⁻¹` of [`bernstein_transform`].
///
/// Its entries are products of Bernstein polynomials evaluated at the source
/// end points expressed in the local coordinate of the target interval.
pub fn transform_inverse<T: Scalar>(p: usize, source: (&T, &T), target: (&T, &T)) -> Result<Matrix<T>> {
    let (s0, s1) = source;
    let (t0, t1) = target;
    if !(s1 > s0) {
        return Err(Error::DegenerateInterval { lo: s0.to_f64_lossy(), hi: s1.to_f64_lossy() });
    }
    if !(t1 > t0) {
        return Err(Error::DegenerateInterval { lo: t0.to_f64_lossy(), hi: t1.to_f64_lossy() });
    }
    let ht = t1.clone() - t0.clone();
    let a = (s0.clone() - t0.clone()) / ht.clone();
    let b = (s1.clone() - t0.clone()) / ht;
    let at_b: Vec<Vec<T>> = (0..=p).map(|q| bernstein_unit(q, &b)).collect();
    let at_a: Vec<Vec<T>> = (0..=p + 1).map(|q| bernstein_unit(q, &a)).collect();
    // One-based indices j, k, l as in the closed form.
    Ok(Matrix::from_fn(p + 1, p + 1, |j0, k0| {
        let (j, k) = (j0 + 1, k0 + 1);
        let l_lo = 1.max((j + k).saturating_sub(p + 1));
        let l_hi = j.min(k);
        let mut acc = T::zero();
        for l in l_lo..=l_hi {
            let first = at_b[j - 1][l - 1].clone();
            let second = at_a[p + 1 - j][k - l].clone();
            acc = acc + first * second;
        }
        acc
    }))
}

/// Mixed Gram matrix `∫ B^p_a B^q_b dξ` between Bernstein bases of degrees `p`
/// and `q` on the same interval of length `h`.
pub fn bernstein_mixed_gram<T: Scalar>(p: usize, q: usize, h: &T) -> Matrix<T> {
    Matrix::from_fn(p + 1, q + 1, |a, b| {
        let num: T = binomial::<T>(p, a) * binomial::<T>(q, b);
        let den: T = binomial::<T>(p + q, a + b) * T::from_int((p + q + 1) as i64);
        num / den * h.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn partition_of_unity() {
        let b = BernsteinBasis::new(r(1, 3), r(2, 3), 4).unwrap();
        let v = b.eval(&r(1, 2)).unwrap();
        assert_eq!(v.iter().fold(r(0, 1), |a, x| a + x), r(1, 1));
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let b = BernsteinBasis::new(0.0, 1.0, 2).unwrap();
        assert!(matches!(b.eval(&1.5), Err(Error::OutOfDomain { .. })));
        assert!(BernsteinBasis::new(1.0, 1.0, 2).is_err());
    }

    #[test]
    fn transform_half_interval() {
        let m = bernstein_transform(2, (&r(0, 1), &r(1, 1)), (&r(0, 1), &r(1, 2))).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(1, 2), r(1, 2), r(0, 1)],
            vec![r(1, 4), r(1, 2), r(1, 4)],
        ])
        .unwrap();
        assert_eq!(m, expected);
        let inv = transform_inverse(2, (&r(0, 1), &r(1, 1)), (&r(0, 1), &r(1, 2))).unwrap();
        assert_eq!(inv.inverse().unwrap(), expected);
    }

    #[test]
    fn gram_matches_quadrature() {
        let h = 0.7;
        let g = bernstein_gram(3, &h);
        let basis = BernsteinBasis::new(0.1, 0.8, 3).unwrap();
        let rule = crate::quadrature::GaussRule::new(4);
        let mut q = Matrix::<f64>::zeros(4, 4);
        for (x, w) in rule.on_interval(0.1, 0.8) {
            let v = basis.eval(&x).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    q[(a, b)] += w * v[a] * v[b];
                }
            }
        }
        assert!(g.max_abs_diff(&q) < 1e-15);
    }
}
