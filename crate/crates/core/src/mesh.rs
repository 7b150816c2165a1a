//! Bézier-extracted meshes: the common element representation for conforming,
//! broken (mortar) and weakly continuous discretizations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Side};
use crate::linalg::Matrix;
use crate::quadrature::GaussRule;
use crate::spline::bernstein::{bernstein_unit, bernstein_unit_derivative};

/// One integration cell of a patch element.
///
/// The element functions are `φ_k = (Σ_b E_kb B_b) / W` with `B_b` the tensor
/// Bernstein polynomials of the parent element (`ξ1` index fastest) and
/// `W = Σ_b ω_b B_b`. The geometry is `x = Σ_b ω_b P_b B_b / W`. The operator
/// `E` is only valid inside `cell_box`, which is a sub-box of `parent_box`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractedElement {
    pub patch: usize,
    pub parent: usize,
    pub degree: [usize; 2],
    pub parent_box: [[f64; 2]; 2],
    pub cell_box: [[f64; 2]; 2],
    pub dofs: Vec<usize>,
    pub operator: Matrix<f64>,
    pub bezier_weights: Vec<f64>,
    pub bezier_points: Vec<Point>,
}

/// Functions and geometry evaluated at one parametric point.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementPoint {
    pub x: Point,
    pub values: Vec<f64>,
    /// Physical gradients of the functions.
    pub grads: Vec<[f64; 2]>,
    /// `jacobian[i][d] = ∂x_i / ∂ξ_d`.
    pub jacobian: [[f64; 2]; 2],
    pub det_j: f64,
}

impl ExtractedElement {
    pub fn num_bernstein(&self) -> usize {
        (self.degree[0] + 1) * (self.degree[1] + 1)
    }

    fn bernstein(&self, xi: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
        let mut b = [Vec::new(), Vec::new()];
        let mut db = [Vec::new(), Vec::new()];
        for d in 0..2 {
            let [lo, hi] = self.parent_box[d];
            let h = hi - lo;
            let t = (xi[d] - lo) / h;
            b[d] = bernstein_unit(self.degree[d], &t);
            db[d] = bernstein_unit_derivative(self.degree[d], &t).into_iter().map(|v| v / h).collect();
        }
        let n0 = self.degree[0] + 1;
        let nb = self.num_bernstein();
        let mut vals = Vec::with_capacity(nb);
        let mut grads = Vec::with_capacity(nb);
        for k in 0..nb {
            let (i, j) = (k % n0, k / n0);
            vals.push(b[0][i] * b[1][j]);
            grads.push([db[0][i] * b[1][j], b[0][i] * db[1][j]]);
        }
        (vals, grads)
    }

    /// Geometry only: physical point, Jacobian and its determinant.
    pub fn geometry(&self, xi: [f64; 2]) -> (Point, [[f64; 2]; 2], f64) {
        let (b, db) = self.bernstein(xi);
        let (x, jac, _, _) = self.map_point(&b, &db);
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        (x, jac, det)
    }

    fn map_point(&self, b: &[f64], db: &[[f64; 2]]) -> (Point, [[f64; 2]; 2], f64, [f64; 2]) {
        let mut w = 0.0;
        let mut dw = [0.0; 2];
        let mut hx = [0.0; 2];
        let mut dhx = [[0.0; 2]; 2];
        for k in 0..b.len() {
            let om = self.bezier_weights[k];
            let p = self.bezier_points[k];
            w += om * b[k];
            for d in 0..2 {
                dw[d] += om * db[k][d];
                for i in 0..2 {
                    dhx[i][d] += om * p[i] * db[k][d];
                }
            }
            for i in 0..2 {
                hx[i] += om * p[i] * b[k];
            }
        }
        let x = [hx[0] / w, hx[1] / w];
        let mut jac = [[0.0; 2]; 2];
        for i in 0..2 {
            for d in 0..2 {
                jac[i][d] = (dhx[i][d] - x[i] * dw[d]) / w;
            }
        }
        (x, jac, w, dw)
    }

    /// Evaluates functions, physical gradients and geometry at parametric
    /// point `xi` (in patch coordinates).
    pub fn eval(&self, xi: [f64; 2]) -> Result<ElementPoint> {
        let (b, db) = self.bernstein(xi);
        let (x, jac, w, dw) = self.map_point(&b, &db);
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.abs() > 0.0) || !det.is_finite() {
            return Err(Error::DegenerateJacobian { element: self.parent, det });
        }
        // Inverse transpose of the Jacobian.
        let inv_t = [[jac[1][1] / det, -jac[1][0] / det], [-jac[0][1] / det, jac[0][0] / det]];
        let n = self.operator.nrows();
        let mut values = Vec::with_capacity(n);
        let mut grads = Vec::with_capacity(n);
        for k in 0..n {
            let row = self.operator.row(k);
            let mut v = 0.0;
            let mut dv = [0.0; 2];
            for (c, e) in row.iter().enumerate() {
                if *e == 0.0 {
                    continue;
                }
                v += e * b[c];
                dv[0] += e * db[c][0];
                dv[1] += e * db[c][1];
            }
            let f = v / w;
            let g = [(dv[0] - f * dw[0]) / w, (dv[1] - f * dw[1]) / w];
            values.push(f);
            grads.push([inv_t[0][0] * g[0] + inv_t[0][1] * g[1], inv_t[1][0] * g[0] + inv_t[1][1] * g[1]]);
        }
        Ok(ElementPoint { x, values, grads, jacobian: jac, det_j: det })
    }

    /// Tensor Gauss points of the cell with `n` points per direction, with the
    /// parametric weights.
    pub fn quadrature(&self, n: [usize; 2]) -> Vec<([f64; 2], f64)> {
        let r0 = GaussRule::new(n[0]);
        let r1 = GaussRule::new(n[1]);
        let mut out = Vec::with_capacity(n[0] * n[1]);
        for (y, wy) in r1.on_interval(self.cell_box[1][0], self.cell_box[1][1]) {
            for (x, wx) in r0.on_interval(self.cell_box[0][0], self.cell_box[0][1]) {
                out.push(([x, y], wx * wy));
            }
        }
        out
    }

    /// Whether the cell has an edge on `side` of a patch with parametric
    /// domain `domain`.
    pub fn touches(&self, side: Side, domain: [[f64; 2]; 2]) -> bool {
        let d = side.normal_dir();
        let end = usize::from(side.is_upper());
        let tol = 1e-12 * (domain[d][1] - domain[d][0]);
        (self.cell_box[d][end] - domain[d][end]).abs() <= tol
    }

    /// Whether the parametric point lies inside the cell (closed box).
    pub fn contains(&self, xi: [f64; 2]) -> bool {
        (0..2).all(|d| {
            let tol = 1e-12 * (self.parent_box[d][1] - self.parent_box[d][0]);
            xi[d] >= self.cell_box[d][0] - tol && xi[d] <= self.cell_box[d][1] + tol
        })
    }
}

/// A collection of extracted elements over a common set of global DOFs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractedMesh {
    pub elements: Vec<ExtractedElement>,
    pub num_dofs: usize,
    /// Parametric domain of every patch, `[dir][lo, hi]`.
    pub patch_domains: Vec<[[f64; 2]; 2]>,
}

impl ExtractedMesh {
    /// Index of a cell of `patch` containing the parametric point `xi`.
    pub fn locate(&self, patch: usize, xi: [f64; 2]) -> Option<usize> {
        self.elements.iter().position(|e| e.patch == patch && e.contains(xi))
    }

    /// Evaluates a scalar field with coefficients `coeffs` (one per DOF).
    pub fn eval_field(&self, patch: usize, xi: [f64; 2], coeffs: &[f64]) -> Result<(f64, [f64; 2])> {
        let e = self.locate(patch, xi).ok_or(Error::OutOfDomain { value: xi[0], lo: f64::NAN, hi: f64::NAN })?;
        let el = &self.elements[e];
        let pt = el.eval(xi)?;
        let mut v = 0.0;
        let mut g = [0.0; 2];
        for (k, &dof) in el.dofs.iter().enumerate() {
            v += coeffs[dof] * pt.values[k];
            g[0] += coeffs[dof] * pt.grads[k][0];
            g[1] += coeffs[dof] * pt.grads[k][1];
        }
        Ok((v, g))
    }

    /// Physical area, integrated over all cells.
    pub fn area(&self, points: usize) -> Result<f64> {
        let mut a = 0.0;
        for el in &self.elements {
            for (xi, w) in el.quadrature([points, points]) {
                let (_, _, det) = el.geometry(xi);
                a += w * det.abs();
            }
        }
        Ok(a)
    }

    /// Total number of stored operator entries.
    pub fn operator_size(&self) -> usize {
        self.elements.iter().map(|e| e.operator.nrows() * e.operator.ncols()).sum()
    }
}
