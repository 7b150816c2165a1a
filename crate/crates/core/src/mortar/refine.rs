//! Breakpoint merging and refinement of the slave interface basis.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spline::KnotVector;

/// Default tolerance for identifying breakpoints, relative to the domain length.
pub const BREAKPOINT_TOL: f64 = 1e-10;

/// Sorted union of two breakpoint lists; values closer than `tol` to an
/// earlier value are dropped.
pub fn merge_breakpoints<T: Scalar>(a: &[T], b: &[T], tol: f64) -> Vec<T> {
    let mut all: Vec<T> = a.iter().chain(b).cloned().collect();
    all.sort_by(|x, y| x.partial_cmp(y).expect("comparable breakpoints"));
    let mut out: Vec<T> = Vec::with_capacity(all.len());
    for v in all {
        match out.last() {
            Some(last) if (v.clone() - last.clone()).magnitude() <= tol => {}
            _ => out.push(v),
        }
    }
    out
}

/// Refined slave interface basis of level `level`.
///
/// Level 0 returns the slave basis itself. Level 1 adds the projected master
/// breakpoints that are not already slave breakpoints. Every further level
/// bisects all spans once more. Returns the refined knot vector and the
/// matrix `S` with `N_slave = S N_refined`.
pub fn refined_interface_knots<T: Scalar>(
    slave: &KnotVector<T>,
    projected_master: &[T],
    level: usize,
) -> Result<(KnotVector<T>, Matrix<T>)> {
    if level == 0 {
        return Ok((slave.clone(), Matrix::identity(slave.num_basis())));
    }
    let (lo, hi) = slave.domain();
    let tol = BREAKPOINT_TOL * (hi.clone() - lo.clone()).magnitude();
    let existing = slave.breakpoints();
    let mut extra: Vec<T> = Vec::new();
    for k in merge_breakpoints(projected_master, &[], tol) {
        let interior = k.clone() - lo.clone() > T::zero() && hi.clone() - k.clone() > T::zero();
        let far = (k.clone() - lo.clone()).magnitude() > tol && (hi.clone() - k.clone()).magnitude() > tol;
        let known = existing.iter().any(|e| (e.clone() - k.clone()).magnitude() <= tol);
        if interior && far && !known {
            extra.push(k);
        }
    }
    let (level1, s1) = slave.refine(&extra)?;
    if level == 1 {
        return Ok((level1, s1));
    }
    let more = level1.uniform_refinement_knots(level - 1);
    let (fine, s2) = level1.refine(&more)?;
    Ok((fine, s1.matmul(&s2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn merge_deduplicates() {
        let m = merge_breakpoints(&[0.0, 0.5, 1.0], &[0.0, 0.5 + 1e-12, 0.7, 1.0], 1e-10);
        assert_eq!(m, vec![0.0, 0.5, 0.7, 1.0]);
    }

    #[test]
    fn level_one_adds_master_knots() {
        let slave =
            KnotVector::new(vec![r(0, 1), r(0, 1), r(0, 1), r(1, 3), r(2, 3), r(1, 1), r(1, 1), r(1, 1)], 2).unwrap();
        let (kv, s) = refined_interface_knots(&slave, &[r(0, 1), r(1, 2), r(1, 1)], 1).unwrap();
        assert_eq!(kv.breakpoints(), vec![r(0, 1), r(1, 3), r(1, 2), r(2, 3), r(1, 1)]);
        assert_eq!(s.shape(), (5, 6));
        let (kv2, _) = refined_interface_knots(&slave, &[r(1, 2)], 2).unwrap();
        assert_eq!(kv2.num_elements(), 8);
    }
}
