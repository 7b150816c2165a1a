//! Bézier extraction of univariate B-spline bases.

use super::knots::{KnotSpan, KnotVector};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Element extraction operator `Cᵉ` with `Nᵉ = Cᵉ Bᵉ`.
///
/// Rows are the `p + 1` basis functions supported on the element (starting at
/// `span.first_function`), columns the Bernstein polynomials of the element.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementExtraction<T> {
    pub span: KnotSpan<T>,
    pub operator: Matrix<T>,
}

impl<T: Scalar> ElementExtraction<T> {
    /// Global indices of the functions supported on the element.
    pub fn functions(&self) -> std::ops::Range<usize> {
        let p = self.operator.nrows() - 1;
        self.span.first_function..self.span.first_function + p + 1
    }

    /// Reconstruction operator `Rᵉ = (Cᵉ)⁻¹`.
    pub fn reconstruction(&self) -> Result<Matrix<T>> {
        self.operator.inverse()
    }
}

/// Element extraction operators of every non-empty span, in order.
pub fn extraction_operators<T: Scalar>(kv: &KnotVector<T>) -> Vec<ElementExtraction<T>> {
    let p = kv.degree();
    let u = kv.knots();
    let m = u.len();
    let spans = kv.spans();
    let uk = |i: usize| u[i - 1].clone();

    let mut ops: Vec<Matrix<T>> = vec![Matrix::identity(p + 1)];
    let mut a = p + 1;
    let mut b = a + 1;
    let mut alphas = vec![T::zero(); p + 1];
    while b < m {
        let mut next = Matrix::identity(p + 1);
        let i = b;
        while b < m && uk(b + 1) == uk(b) {
            b += 1;
        }
        let mult = b - i + 1;
        let nb = ops.len() - 1;
        if mult < p {
            let numer = uk(b) - uk(a);
            for j in (mult + 1..=p).rev() {
                alphas[j - mult - 1] = numer.clone() / (uk(a + j) - uk(a));
            }
            let r = p - mult;
            for j in 1..=r {
                let save = r - j + 1;
                let s = mult + j;
                for k in (s + 1..=p + 1).rev() {
                    let alpha = alphas[k - s - 1].clone();
                    for row in 0..=p {
                        let v = alpha.clone() * ops[nb][(row, k - 1)].clone()
                            + (T::one() - alpha.clone()) * ops[nb][(row, k - 2)].clone();
                        ops[nb][(row, k - 1)] = v;
                    }
                }
                if b < m {
                    // next(save : j + save, save) = current(p - j + 1 : p + 1, p + 1), one-based.
                    for t in 0..=j {
                        next[(save - 1 + t, save - 1)] = ops[nb][(p - j + t, p)].clone();
                    }
                }
            }
        }
        if b < m {
            ops.push(next);
            a = b;
            b += 1;
        }
    }
    ops.truncate(spans.len());
    spans.into_iter().zip(ops).map(|(span, operator)| ElementExtraction { span, operator }).collect()
}

/// Extraction operators computed by saturating every interior knot to
/// multiplicity `p + 1` through knot insertion. Independent of
/// [`extraction_operators`] and used to cross-check it.
pub fn extraction_by_insertion<T: Scalar>(kv: &KnotVector<T>) -> Vec<Matrix<T>> {
    let p = kv.degree();
    let (bps, mults) = kv.breakpoints_with_multiplicity();
    let mut extra = Vec::new();
    for (k, m) in bps.iter().zip(&mults).skip(1).take(bps.len().saturating_sub(2)) {
        for _ in *m..=p {
            extra.push(k.clone());
        }
    }
    let (_, s) = super::knots::insert_knots_raw(kv.knots(), p, &extra);
    kv.spans()
        .iter()
        .enumerate()
        .map(|(e, span)| Matrix::from_fn(p + 1, p + 1, |a, c| s[(span.first_function + a, e * (p + 1) + c)].clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn quadratic_two_elements() {
        let kv = KnotVector::new(vec![r(0, 1), r(0, 1), r(0, 1), r(1, 2), r(1, 1), r(1, 1), r(1, 1)], 2).unwrap();
        let ops = extraction_operators(&kv);
        assert_eq!(ops.len(), 2);
        let c1 = Matrix::from_rows(vec![
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1), r(1, 2)],
            vec![r(0, 1), r(0, 1), r(1, 2)],
        ])
        .unwrap();
        let c2 = Matrix::from_rows(vec![
            vec![r(1, 2), r(0, 1), r(0, 1)],
            vec![r(1, 2), r(1, 1), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(1, 1)],
        ])
        .unwrap();
        assert_eq!(ops[0].operator, c1);
        assert_eq!(ops[1].operator, c2);
    }

    #[test]
    fn matches_insertion_oracle_with_repeated_knots() {
        let kv = KnotVector::new(
            vec![
                r(0, 1),
                r(0, 1),
                r(0, 1),
                r(0, 1),
                r(1, 5),
                r(1, 2),
                r(1, 2),
                r(7, 10),
                r(1, 1),
                r(1, 1),
                r(1, 1),
                r(1, 1),
            ],
            3,
        )
        .unwrap();
        let ops = extraction_operators(&kv);
        let oracle = extraction_by_insertion(&kv);
        assert_eq!(ops.len(), oracle.len());
        for (op, o) in ops.iter().zip(&oracle) {
            assert_eq!(&op.operator, o);
        }
    }
}
