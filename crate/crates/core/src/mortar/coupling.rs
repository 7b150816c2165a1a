//! Mortar coupling matrices `G_IJ = ∫ N̄_I N^m_J(φ)` between a slave dual
//! basis and the trace basis of a master side.

use crate::error::{Error, Result};
use crate::geometry::NurbsCurve;
use crate::linalg::Matrix;
use crate::projection::DualBasis;
use crate::quadrature::GaussRule;
use crate::scalar::Scalar;
use crate::spline::bernstein::{bernstein_mixed_gram, bernstein_transform};
use crate::spline::extraction::extraction_operators;
use crate::spline::KnotVector;

use super::map::InterfaceMap;
use super::refine::{merge_breakpoints, BREAKPOINT_TOL};

/// Affine parameter map `s = scale * t + offset` from slave to master.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    pub scale: T,
    pub offset: T,
}

impl<T: Scalar> AffineMap<T> {
    pub fn identity() -> Self {
        Self { scale: T::one(), offset: T::zero() }
    }

    /// The affine map sending `[t0, t1]` onto `[s0, s1]`.
    pub fn between(t0: T, t1: T, s0: T, s1: T) -> Self {
        let scale = (s1 - s0.clone()) / (t1 - t0.clone());
        let offset = s0 - scale.clone() * t0;
        Self { scale, offset }
    }

    pub fn apply(&self, t: &T) -> T {
        self.scale.clone() * t.clone() + self.offset.clone()
    }

    pub fn inverse(&self, s: &T) -> T {
        (s.clone() - self.offset.clone()) / self.scale.clone()
    }
}

/// Exact coupling matrix for polynomial bases and an affine parameter map,
/// integrated segment by segment with Bernstein Gram matrices.
///
/// Rows are the dual functions of `dual`, columns the master basis functions.
/// Only the slave range `range` is integrated.
pub fn coupling_matrix_affine<T: Scalar>(
    dual: &DualBasis<T>,
    master: &KnotVector<T>,
    map: &AffineMap<T>,
    range: (T, T),
) -> Result<Matrix<T>> {
    if map.scale.is_zero() {
        return Err(Error::InvalidInterface("degenerate affine map".into()));
    }
    let ps = dual.knots().degree();
    let pm = master.degree();
    let (lo, hi) = range.clone();
    let projected: Vec<T> = master.breakpoints().iter().map(|s| map.inverse(s)).collect();
    let own: Vec<T> = dual.knots().breakpoints().into_iter().filter(|t| *t > lo && *t < hi).collect();
    let tol = BREAKPOINT_TOL * (hi.clone() - lo.clone()).magnitude();
    let mut bps = merge_breakpoints(&own, &projected, tol);
    bps.retain(|t| *t >= lo && *t <= hi);
    let master_ext = extraction_operators(master);

    let mut g = Matrix::<T>::zeros(dual.num_functions(), master.num_basis());
    let two = T::from_int(2);
    for w in bps.windows(2) {
        let (a, b) = (w[0].clone(), w[1].clone());
        let mid = (a.clone() + b.clone()) / two.clone();
        let e = dual.knots().find_element(&mid)?;
        let el = &dual.elements()[e];
        let ms = bernstein_transform(ps, (el.lo(), el.hi()), (&a, &b))?;
        let slave_coeffs = el.operator.matmul(&ms.transpose())?;

        let (fa, fb) = (map.apply(&a), map.apply(&b));
        let (mlo, mhi) = if fa < fb { (fa, fb) } else { (fb, fa) };
        let f = master.find_element(&map.apply(&mid))?;
        let ext = &master_ext[f];
        let mm = bernstein_transform(pm, (&ext.span.lo, &ext.span.hi), (&mlo, &mhi))?;
        let mut master_coeffs = ext.operator.matmul(&mm.transpose())?;
        if map.scale < T::zero() {
            let rev: Vec<usize> = (0..=pm).rev().collect();
            master_coeffs = master_coeffs.select_cols(&rev);
        }
        let gram = bernstein_mixed_gram(ps, pm, &(b - a));
        let local = slave_coeffs.matmul(&gram)?.matmul(&master_coeffs.transpose())?;
        let (fs, fm) = (el.first_function(), ext.span.first_function);
        for i in 0..=ps {
            for j in 0..=pm {
                g[(fs + i, fm + j)] = g[(fs + i, fm + j)].clone() + local[(i, j)].clone();
            }
        }
    }
    Ok(g)
}

/// Coupling matrix for NURBS sides and a general parameter map, integrated
/// with Gauss quadrature on the merged breakpoints of both sides.
///
/// `slave` must be the slave side curve expressed on the knots of `dual`.
/// Rows are the dual functions `W N̄_I / w_I` (biorthogonal to the slave NURBS
/// basis), columns the master NURBS basis functions. `points` is the number of
/// Gauss points per segment.
pub fn coupling_matrix_nurbs(
    dual: &DualBasis<f64>,
    slave: &NurbsCurve,
    master: &NurbsCurve,
    map: &InterfaceMap,
    points: usize,
) -> Result<Matrix<f64>> {
    if slave.knots() != dual.knots() {
        return Err(Error::DimensionMismatch("slave curve and dual basis use different knots".into()));
    }
    let (lo, hi) = map.range();
    let projected = master.knots().breakpoints().iter().map(|&s| map.to_slave(s)).collect::<Result<Vec<_>>>()?;
    let own: Vec<f64> = dual.knots().breakpoints().into_iter().filter(|&t| t > lo && t < hi).collect();
    let mut bps = merge_breakpoints(&own, &projected, BREAKPOINT_TOL * (hi - lo));
    bps.retain(|&t| t >= lo && t <= hi);
    let rule = GaussRule::new(points);
    let mut g = Matrix::<f64>::zeros(dual.num_functions(), master.knots().num_basis());
    for w in bps.windows(2) {
        for (t, wt) in rule.on_interval(w[0], w[1]) {
            let (fs, dual_vals) = dual.eval_nurbs(&t, slave.weights())?;
            let s = map.to_master(t)?;
            let (fm, rm, _) = master.basis(s)?;
            for (i, dv) in dual_vals.iter().enumerate() {
                for (j, rv) in rm.iter().enumerate() {
                    g[(fs + i, fm + j)] += wt * dv * rv;
                }
            }
        }
    }
    Ok(g)
}
