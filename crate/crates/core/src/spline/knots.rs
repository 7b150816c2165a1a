//! Open knot vectors, Cox-de Boor evaluation and knot insertion.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Open (clamped) knot vector of a degree-`p` B-spline basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotVector<T> {
    knots: Vec<T>,
    degree: usize,
}

/// A non-empty knot span: one Bézier element of a univariate basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotSpan<T> {
    pub lo: T,
    pub hi: T,
    /// Index `s` with `knots[s] <= ξ < knots[s + 1]`.
    pub span: usize,
    /// Index of the first basis function supported on the span (`span - p`).
    pub first_function: usize,
}

impl<T: Scalar> KnotVector<T> {
    /// Validates and wraps a knot vector. The vector must be non-decreasing,
    /// open (end knots repeated `p + 1` times), have a non-empty domain and
    /// interior multiplicities of at most `p`.
    pub fn new(knots: Vec<T>, degree: usize) -> Result<Self> {
        let p = degree;
        if knots.len() < 2 * (p + 1) {
            return Err(Error::InvalidKnotVector(format!("{} knots are too few for degree {p}", knots.len())));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnotVector("knots must be non-decreasing".into()));
        }
        let m = knots.len();
        if knots[..=p].iter().any(|k| *k != knots[0]) || knots[m - p - 1..].iter().any(|k| *k != knots[m - 1]) {
            return Err(Error::InvalidKnotVector("knot vector is not open".into()));
        }
        if !(knots[m - 1] > knots[0]) {
            return Err(Error::InvalidKnotVector("empty parametric domain".into()));
        }
        let kv = Self { knots, degree };
        let (_, mults) = kv.breakpoints_with_multiplicity();
        if mults.len() > 2 && mults[1..mults.len() - 1].iter().any(|&m| m > p) {
            return Err(Error::InvalidKnotVector(format!("interior multiplicity exceeds degree {p}")));
        }
        Ok(kv)
    }

    /// Open knot vector on `[lo, hi]` with `elements` equal spans.
    pub fn uniform(degree: usize, elements: usize, lo: T, hi: T) -> Result<Self> {
        if elements == 0 {
            return Err(Error::InvalidKnotVector("at least one element is required".into()));
        }
        let mut knots = vec![lo.clone(); degree + 1];
        let h = (hi.clone() - lo.clone()) / T::from_int(elements as i64);
        for e in 1..elements {
            knots.push(lo.clone() + h.clone() * T::from_int(e as i64));
        }
        knots.extend(std::iter::repeat_n(hi, degree + 1));
        Self::new(knots, degree)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn num_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn domain(&self) -> (T, T) {
        (self.knots[0].clone(), self.knots[self.knots.len() - 1].clone())
    }

    /// Distinct knot values and their multiplicities.
    pub fn breakpoints_with_multiplicity(&self) -> (Vec<T>, Vec<usize>) {
        let mut values: Vec<T> = Vec::new();
        let mut mults = Vec::new();
        for k in &self.knots {
            if values.last() == Some(k) {
                *mults.last_mut().expect("paired with values") += 1;
            } else {
                values.push(k.clone());
                mults.push(1);
            }
        }
        (values, mults)
    }

    /// Distinct knot values.
    pub fn breakpoints(&self) -> Vec<T> {
        self.breakpoints_with_multiplicity().0
    }

    pub fn num_elements(&self) -> usize {
        self.breakpoints().len() - 1
    }

    /// Non-empty knot spans in increasing order.
    pub fn spans(&self) -> Vec<KnotSpan<T>> {
        let p = self.degree;
        (p..self.knots.len() - p - 1)
            .filter(|&s| self.knots[s + 1] > self.knots[s])
            .map(|s| KnotSpan {
                lo: self.knots[s].clone(),
                hi: self.knots[s + 1].clone(),
                span: s,
                first_function: s - p,
            })
            .collect()
    }

    /// Span index `s` with `knots[s] <= xi < knots[s+1]`; the right end of the
    /// domain belongs to the last non-empty span.
    pub fn find_span(&self, xi: &T) -> Result<usize> {
        let (lo, hi) = self.domain();
        if *xi < lo || *xi > hi {
            return Err(Error::OutOfDomain { value: xi.to_f64_lossy(), lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
        }
        let p = self.degree;
        let n = self.num_basis();
        if *xi >= self.knots[n] {
            let mut s = n - 1;
            while self.knots[s] >= self.knots[s + 1] {
                s -= 1;
            }
            return Ok(s);
        }
        let (mut low, mut high) = (p, n);
        while high - low > 1 {
            let mid = (low + high) / 2;
            if *xi < self.knots[mid] {
                high = mid;
            } else {
                low = mid;
            }
        }
        Ok(low)
    }

    /// Index of the element (non-empty span, counted from zero) containing `xi`.
    pub fn find_element(&self, xi: &T) -> Result<usize> {
        let s = self.find_span(xi)?;
        Ok(self.knots[self.degree..=s].windows(2).filter(|w| w[1] > w[0]).count())
    }

    /// The `p + 1` non-zero basis functions at `xi` (Cox-de Boor recursion)
    /// together with the index of the first one.
    pub fn basis(&self, xi: &T) -> Result<(usize, Vec<T>)> {
        let s = self.find_span(xi)?;
        Ok((s - self.degree, self.basis_in_span(s, xi)))
    }

    fn basis_in_span(&self, s: usize, xi: &T) -> Vec<T> {
        let p = self.degree;
        let u = &self.knots;
        let mut n = vec![T::zero(); p + 1];
        let mut left = vec![T::zero(); p + 1];
        let mut right = vec![T::zero(); p + 1];
        n[0] = T::one();
        for j in 1..=p {
            left[j] = xi.clone() - u[s + 1 - j].clone();
            right[j] = u[s + j].clone() - xi.clone();
            let mut saved = T::zero();
            for r in 0..j {
                let temp = n[r].clone() / (right[r + 1].clone() + left[j - r].clone());
                n[r] = saved + right[r + 1].clone() * temp.clone();
                saved = left[j - r].clone() * temp;
            }
            n[j] = saved;
        }
        n
    }

    /// Non-zero basis functions and their first derivatives at `xi`.
    pub fn basis_with_derivative(&self, xi: &T) -> Result<(usize, Vec<T>, Vec<T>)> {
        let s = self.find_span(xi)?;
        let p = self.degree;
        let vals = self.basis_in_span(s, xi);
        if p == 0 {
            return Ok((s, vals, vec![T::zero()]));
        }
        let lower = KnotVector { knots: self.knots.clone(), degree: p - 1 }.basis_in_span(s, xi);
        let u = &self.knots;
        let pf = T::from_int(p as i64);
        let ders = (0..=p)
            .map(|k| {
                // Function s - p + k; its lower-degree neighbours are k - 1 and k
                // within the degree p - 1 functions starting at s - p + 1.
                let i = s - p + k;
                let mut d = T::zero();
                if k > 0 {
                    let den = u[i + p].clone() - u[i].clone();
                    if !den.is_zero() {
                        d = d + pf.clone() * lower[k - 1].clone() / den;
                    }
                }
                if k < p {
                    let den = u[i + p + 1].clone() - u[i + 1].clone();
                    if !den.is_zero() {
                        d = d - pf.clone() * lower[k].clone() / den;
                    }
                }
                d
            })
            .collect();
        Ok((s - p, vals, ders))
    }

    /// Values of all basis functions at `xi` (dense vector).
    pub fn eval_all(&self, xi: &T) -> Result<Vec<T>> {
        let (first, vals) = self.basis(xi)?;
        let mut out = vec![T::zero(); self.num_basis()];
        for (k, v) in vals.into_iter().enumerate() {
            out[first + k] = v;
        }
        Ok(out)
    }

    /// Greville abscissae.
    pub fn greville(&self) -> Vec<T> {
        let p = self.degree;
        if p == 0 {
            return self.spans().into_iter().map(|s| (s.lo + s.hi) / T::from_int(2)).collect();
        }
        (0..self.num_basis())
            .map(|i| self.knots[i + 1..=i + p].iter().fold(T::zero(), |a, k| a + k.clone()) / T::from_int(p as i64))
            .collect()
    }

    /// Inserts a single knot. Returns the refined knot vector and the matrix
    /// `S` (`n_old × n_new`) with `N_old = S N_new`; control values transform
    /// as `c_new = Sᵀ c_old`.
    pub fn insert(&self, xi: &T) -> Result<(Self, Matrix<T>)> {
        let (lo, hi) = self.domain();
        if !(*xi > lo && *xi < hi) {
            return Err(Error::OutOfDomain { value: xi.to_f64_lossy(), lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
        }
        let knots = insert_raw(&self.knots, xi);
        let s = insertion_matrix(&self.knots, self.degree, xi);
        Ok((Self::new(knots, self.degree)?, s))
    }

    /// Inserts several knots (in any order). Returns the refined vector and the
    /// cumulative matrix `S` with `N_old = S N_new`.
    pub fn refine(&self, new_knots: &[T]) -> Result<(Self, Matrix<T>)> {
        let mut current = self.clone();
        let mut s = Matrix::identity(self.num_basis());
        let mut sorted = new_knots.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("comparable knots"));
        for k in &sorted {
            let (next, step) = current.insert(k)?;
            s = s.matmul(&step)?;
            current = next;
        }
        Ok((current, s))
    }

    /// Knot vector with every span bisected `times` times.
    pub fn uniform_refinement_knots(&self, times: usize) -> Vec<T> {
        let mut extra = Vec::new();
        let mut bps = self.breakpoints();
        for _ in 0..times {
            let mut next = Vec::with_capacity(2 * bps.len());
            for w in bps.windows(2) {
                let mid = (w[0].clone() + w[1].clone()) / T::from_int(2);
                next.push(w[0].clone());
                next.push(mid.clone());
                extra.push(mid);
            }
            next.push(bps[bps.len() - 1].clone());
            bps = next;
        }
        extra
    }
}

fn insert_raw<T: Scalar>(knots: &[T], xi: &T) -> Vec<T> {
    let pos = knots.iter().position(|k| k > xi).unwrap_or(knots.len());
    let mut out = knots.to_vec();
    out.insert(pos, xi.clone());
    out
}

/// Matrix `S` (`n × (n + 1)`) for inserting `xi` once into `knots`, with
/// `N_old = S N_new`. Works for any multiplicity, including one that makes
/// the basis discontinuous.
fn insertion_matrix<T: Scalar>(knots: &[T], p: usize, xi: &T) -> Matrix<T> {
    let n = knots.len() - p - 1;
    // Last index k with knots[k] <= xi.
    let k = knots.iter().rposition(|u| u <= xi).expect("xi is inside the domain").min(n - 1);
    let mut s = Matrix::zeros(n, n + 1);
    for i in 0..=n {
        // New control value i = alpha * old_i + (1 - alpha) * old_{i-1}.
        let alpha = if i + p <= k {
            T::one()
        } else if i > k {
            T::zero()
        } else {
            (xi.clone() - knots[i].clone()) / (knots[i + p].clone() - knots[i].clone())
        };
        if i < n && !alpha.is_zero() {
            s[(i, i)] = alpha.clone();
        }
        if i > 0 {
            let beta = T::one() - alpha;
            if !beta.is_zero() {
                s[(i - 1, i)] = beta;
            }
        }
    }
    s
}

/// Refinement matrix for inserting knots into a raw (possibly non-open-interior)
/// knot sequence; used by the extraction oracle and degree-preserving splits.
pub fn insert_knots_raw<T: Scalar>(knots: &[T], p: usize, new_knots: &[T]) -> (Vec<T>, Matrix<T>) {
    let mut current = knots.to_vec();
    let mut s = Matrix::identity(knots.len() - p - 1);
    for k in new_knots {
        let step = insertion_matrix(&current, p, k);
        s = s.matmul(&step).expect("conforming shapes");
        current = insert_raw(&current, k);
    }
    (current, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn kv(v: &[(i64, i64)], p: usize) -> KnotVector<Rational64> {
        KnotVector::new(v.iter().map(|&(n, d)| r(n, d)).collect(), p).unwrap()
    }

    #[test]
    fn validation() {
        assert!(KnotVector::new(vec![0.0, 0.5, 1.0, 1.0, 1.0, 1.0], 2).is_err());
        assert!(KnotVector::new(vec![0.0, 0.0, 0.0, 0.6, 0.5, 1.0, 1.0, 1.0], 2).is_err());
        assert!(KnotVector::new(vec![0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0], 2).is_err());
        assert!(KnotVector::new(vec![0.0, 0.0, 0.0, 0.5, 0.5, 1.0, 1.0, 1.0], 2).is_ok());
    }

    #[test]
    fn spans_and_elements() {
        let k = kv(&[(0, 1), (0, 1), (0, 1), (1, 3), (2, 3), (1, 1), (1, 1), (1, 1)], 2);
        assert_eq!(k.num_basis(), 5);
        assert_eq!(k.spans().len(), 3);
        assert_eq!(k.find_element(&r(1, 2)).unwrap(), 1);
        assert_eq!(k.find_element(&r(1, 1)).unwrap(), 2);
        assert_eq!(k.find_element(&r(1, 3)).unwrap(), 1);
    }

    #[test]
    fn partition_of_unity_exact() {
        let k = kv(&[(0, 1), (0, 1), (0, 1), (0, 1), (1, 4), (1, 2), (1, 2), (1, 1), (1, 1), (1, 1), (1, 1)], 3);
        for x in [r(0, 1), r(1, 7), r(1, 2), r(5, 6), r(1, 1)] {
            let (_, v) = k.basis(&x).unwrap();
            assert_eq!(v.into_iter().fold(r(0, 1), |a, b| a + b), r(1, 1));
        }
    }

    #[test]
    fn insertion_preserves_functions() {
        let k = kv(&[(0, 1), (0, 1), (0, 1), (1, 2), (1, 1), (1, 1), (1, 1)], 2);
        let (fine, s) = k.insert(&r(1, 3)).unwrap();
        for x in [r(0, 1), r(1, 5), r(1, 3), r(3, 4), r(1, 1)] {
            let coarse = k.eval_all(&x).unwrap();
            let refined = s.mul_vec(&fine.eval_all(&x).unwrap()).unwrap();
            assert_eq!(coarse, refined);
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let k = KnotVector::new(vec![0.0, 0.0, 0.0, 0.0, 0.3, 0.5, 1.0, 1.0, 1.0, 1.0], 3).unwrap();
        let x = 0.41;
        let h = 1e-6;
        let (first, _, d): (usize, Vec<f64>, Vec<f64>) = k.basis_with_derivative(&x).unwrap();
        let plus = k.eval_all(&(x + h)).unwrap();
        let minus = k.eval_all(&(x - h)).unwrap();
        for (i, di) in d.iter().enumerate() {
            let fd = (plus[first + i] - minus[first + i]) / (2.0 * h);
            assert!((fd - di).abs() < 1e-6);
        }
    }
}
