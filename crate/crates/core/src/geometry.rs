//! NURBS curves and surfaces, patch sides and multi-patch models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::spline::KnotVector;

pub type Point = [f64; 2];

/// One of the four sides of a parametric patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `ξ1` at its lower bound; parameterized by `ξ2`.
    Xi0,
    /// `ξ1` at its upper bound; parameterized by `ξ2`.
    Xi1,
    /// `ξ2` at its lower bound; parameterized by `ξ1`.
    Eta0,
    /// `ξ2` at its upper bound; parameterized by `ξ1`.
    Eta1,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Xi0, Side::Xi1, Side::Eta0, Side::Eta1];

    /// Parametric direction running along the side.
    pub fn tangent_dir(self) -> usize {
        match self {
            Side::Xi0 | Side::Xi1 => 1,
            Side::Eta0 | Side::Eta1 => 0,
        }
    }

    /// Parametric direction that is constant on the side.
    pub fn normal_dir(self) -> usize {
        1 - self.tangent_dir()
    }

    /// Whether the side sits at the upper end of its normal direction.
    pub fn is_upper(self) -> bool {
        matches!(self, Side::Xi1 | Side::Eta1)
    }

    pub fn is_adjacent(self, other: Side) -> bool {
        self.normal_dir() != other.normal_dir()
    }
}

/// Rational B-spline curve in the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct NurbsCurve {
    knots: KnotVector<f64>,
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl NurbsCurve {
    pub fn new(knots: KnotVector<f64>, points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != knots.num_basis() || weights.len() != points.len() {
            return Err(Error::InvalidGeometry(format!(
                "{} control points and {} weights for {} basis functions",
                points.len(),
                weights.len(),
                knots.num_basis()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidGeometry("weights must be positive".into()));
        }
        Ok(Self { knots, points, weights })
    }

    pub fn knots(&self) -> &KnotVector<f64> {
        &self.knots
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (f64, f64) {
        self.knots.domain()
    }

    /// NURBS basis `wᵢ Nᵢ / W` and derivatives at `t`, with the first index.
    pub fn basis(&self, t: f64) -> Result<(usize, Vec<f64>, Vec<f64>)> {
        let (first, n, dn) = self.knots.basis_with_derivative(&t)?;
        let w: f64 = n.iter().enumerate().map(|(k, v)| v * self.weights[first + k]).sum();
        let dw: f64 = dn.iter().enumerate().map(|(k, v)| v * self.weights[first + k]).sum();
        let r: Vec<f64> = n.iter().enumerate().map(|(k, v)| v * self.weights[first + k] / w).collect();
        let dr = dn.iter().enumerate().map(|(k, dv)| (dv * self.weights[first + k] - r[k] * dw) / w).collect();
        Ok((first, r, dr))
    }

    /// Weight function `W(t) = Σ wᵢ Nᵢ(t)`.
    pub fn weight_function(&self, t: f64) -> Result<f64> {
        let (first, n) = self.knots.basis(&t)?;
        Ok(n.iter().enumerate().map(|(k, v)| v * self.weights[first + k]).sum())
    }

    pub fn eval(&self, t: f64) -> Result<Point> {
        Ok(self.eval_with_tangent(t)?.0)
    }

    pub fn eval_with_tangent(&self, t: f64) -> Result<(Point, Point)> {
        let (first, r, dr) = self.basis(t)?;
        let mut x = [0.0; 2];
        let mut dx = [0.0; 2];
        for k in 0..r.len() {
            let p = self.points[first + k];
            for d in 0..2 {
                x[d] += r[k] * p[d];
                dx[d] += dr[k] * p[d];
            }
        }
        Ok((x, dx))
    }
}

/// Tensor-product NURBS surface patch. Control point `(i, j)` is stored at
/// `i + n1 * j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    knots: [KnotVector<f64>; 2],
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl Patch {
    pub fn new(knots: [KnotVector<f64>; 2], points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        let n = knots[0].num_basis() * knots[1].num_basis();
        if points.len() != n || weights.len() != n {
            return Err(Error::InvalidGeometry(format!(
                "control net has {} points and {} weights, expected {n}",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidGeometry("weights must be positive".into()));
        }
        Ok(Self { knots, points, weights })
    }

    pub fn knots(&self, dir: usize) -> &KnotVector<f64> {
        &self.knots[dir]
    }

    pub fn degree(&self, dir: usize) -> usize {
        self.knots[dir].degree()
    }

    pub fn num_basis(&self, dir: usize) -> usize {
        self.knots[dir].num_basis()
    }

    pub fn num_functions(&self) -> usize {
        self.num_basis(0) * self.num_basis(1)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i + self.num_basis(0) * j
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn points_mut(&mut self) -> &mut [Point] {
        &mut self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self, dir: usize) -> (f64, f64) {
        self.knots[dir].domain()
    }

    /// Maps parametric coordinates to the physical plane.
    pub fn eval(&self, xi: [f64; 2]) -> Result<Point> {
        let (f0, n0) = self.knots[0].basis(&xi[0])?;
        let (f1, n1) = self.knots[1].basis(&xi[1])?;
        let mut hx = [0.0; 2];
        let mut w = 0.0;
        for (b, vb) in n1.iter().enumerate() {
            for (a, va) in n0.iter().enumerate() {
                let idx = self.index(f0 + a, f1 + b);
                let c = va * vb * self.weights[idx];
                w += c;
                hx[0] += c * self.points[idx][0];
                hx[1] += c * self.points[idx][1];
            }
        }
        Ok([hx[0] / w, hx[1] / w])
    }

    /// Patch-local indices of the functions along `side`, in the order of the
    /// side's parameter.
    pub fn side_functions(&self, side: Side) -> Vec<usize> {
        let (n0, n1) = (self.num_basis(0), self.num_basis(1));
        match side {
            Side::Xi0 => (0..n1).map(|j| self.index(0, j)).collect(),
            Side::Xi1 => (0..n1).map(|j| self.index(n0 - 1, j)).collect(),
            Side::Eta0 => (0..n0).map(|i| self.index(i, 0)).collect(),
            Side::Eta1 => (0..n0).map(|i| self.index(i, n1 - 1)).collect(),
        }
    }

    /// Boundary curve of `side`, parameterized by the side's tangent direction.
    pub fn side_curve(&self, side: Side) -> Result<NurbsCurve> {
        let f = self.side_functions(side);
        NurbsCurve::new(
            self.knots[side.tangent_dir()].clone(),
            f.iter().map(|&k| self.points[k]).collect(),
            f.iter().map(|&k| self.weights[k]).collect(),
        )
    }

    /// Inserts knots in direction `dir`, preserving the geometry exactly.
    pub fn refine(&self, dir: usize, new_knots: &[f64]) -> Result<Self> {
        if new_knots.is_empty() {
            return Ok(self.clone());
        }
        let (kv, s) = self.knots[dir].refine(new_knots)?;
        let (n0, n1) = (self.num_basis(0), self.num_basis(1));
        let (m0, m1) = if dir == 0 { (kv.num_basis(), n1) } else { (n0, kv.num_basis()) };
        let mut hom = vec![[0.0; 3]; m0 * m1];
        for j in 0..n1 {
            for i in 0..n0 {
                let old = self.index(i, j);
                let w = self.weights[old];
                let h = [self.points[old][0] * w, self.points[old][1] * w, w];
                let (line, pos) = if dir == 0 { (j, i) } else { (i, j) };
                for new in 0..s.ncols() {
                    let c = s[(pos, new)];
                    if c == 0.0 {
                        continue;
                    }
                    let (ni, nj) = if dir == 0 { (new, line) } else { (line, new) };
                    let target = &mut hom[ni + m0 * nj];
                    for d in 0..3 {
                        target[d] += c * h[d];
                    }
                }
            }
        }
        let points = hom.iter().map(|h| [h[0] / h[2], h[1] / h[2]]).collect();
        let weights = hom.iter().map(|h| h[2]).collect();
        let mut knots = self.knots.clone();
        knots[dir] = kv;
        Self::new(knots, points, weights)
    }

    /// Bisects every knot span `times` times in both directions.
    pub fn refine_uniform(&self, times: usize) -> Result<Self> {
        let k0 = self.knots[0].uniform_refinement_knots(times);
        let k1 = self.knots[1].uniform_refinement_knots(times);
        self.refine(0, &k0)?.refine(1, &k1)
    }

    /// Inserts `count - 1` equally spaced knots into every span of direction `dir`.
    pub fn subdivide(&self, dir: usize, count: usize) -> Result<Self> {
        let mut extra = Vec::new();
        let bps = self.knots[dir].breakpoints();
        for w in bps.windows(2) {
            for k in 1..count {
                extra.push(w[0] + (w[1] - w[0]) * k as f64 / count as f64);
            }
        }
        self.refine(dir, &extra)
    }
}

/// A patch side, identified by patch index and side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatchSide {
    pub patch: usize,
    pub side: Side,
}

/// A non-conforming interface between a master and a slave patch side.
///
/// The master side is covered entirely; it occupies the parameter range
/// `slave_range` of the slave side (the whole slave side when `None`).
/// `reversed` states that the two sides run in opposite directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interface {
    pub master: PatchSide,
    pub slave: PatchSide,
    #[serde(default)]
    pub reversed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slave_range: Option<[f64; 2]>,
}

/// Patches joined along interfaces.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPatch {
    pub patches: Vec<Patch>,
    pub interfaces: Vec<Interface>,
}

impl MultiPatch {
    pub fn new(patches: Vec<Patch>, interfaces: Vec<Interface>) -> Result<Self> {
        let model = Self { patches, interfaces };
        model.validate()?;
        Ok(model)
    }

    /// Checks patch references and that the interface sides coincide at their
    /// end points.
    pub fn validate(&self) -> Result<()> {
        for (k, itf) in self.interfaces.iter().enumerate() {
            for ps in [itf.master, itf.slave] {
                if ps.patch >= self.patches.len() {
                    return Err(Error::InvalidInterface(format!(
                        "interface {k} references missing patch {}",
                        ps.patch
                    )));
                }
            }
            if itf.master.patch == itf.slave.patch {
                return Err(Error::InvalidInterface(format!("interface {k} couples a patch to itself")));
            }
            let sc = self.patches[itf.slave.patch].side_curve(itf.slave.side)?;
            let mc = self.patches[itf.master.patch].side_curve(itf.master.side)?;
            let (a, b) = itf.slave_range.map_or(sc.domain(), |r| (r[0], r[1]));
            let (m0, m1) = mc.domain();
            let (ma, mb) = if itf.reversed { (m1, m0) } else { (m0, m1) };
            let scale = distance(sc.eval(sc.domain().0)?, sc.eval(sc.domain().1)?).max(f64::MIN_POSITIVE);
            let da = distance(sc.eval(a)?, mc.eval(ma)?);
            let db = distance(sc.eval(b)?, mc.eval(mb)?);
            if da > 1e-8 * scale || db > 1e-8 * scale {
                return Err(Error::NonCoincidentInterface(format!(
                    "interface {k}: end points differ by {:e} and {:e}",
                    da, db
                )));
            }
        }
        Ok(())
    }

    /// Refines every patch uniformly.
    pub fn refine_uniform(&self, times: usize) -> Result<Self> {
        Ok(Self {
            patches: self.patches.iter().map(|p| p.refine_uniform(times)).collect::<Result<_>>()?,
            interfaces: self.interfaces.clone(),
        })
    }
}

pub fn distance(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Degree elevation of a single Bézier segment given in homogeneous coordinates.
pub fn elevate_bezier(points: &[[f64; 3]], times: usize) -> Vec<[f64; 3]> {
    let mut cur = points.to_vec();
    for _ in 0..times {
        let p = cur.len() - 1;
        let mut next = vec![[0.0; 3]; p + 2];
        for (i, q) in next.iter_mut().enumerate() {
            let a = i as f64 / (p + 1) as f64;
            for d in 0..3 {
                let left = if i > 0 { cur[i - 1][d] } else { 0.0 };
                let right = if i <= p { cur[i][d] } else { 0.0 };
                q[d] = a * left + (1.0 - a) * right;
            }
        }
        cur = next;
    }
    cur
}

/// Builds a single-element Bézier patch from homogeneous control points,
/// ordered with `ξ1` fastest.
pub fn bezier_patch(p: [usize; 2], hom: &[[f64; 3]]) -> Result<Patch> {
    let knots = [KnotVector::uniform(p[0], 1, 0.0, 1.0)?, KnotVector::uniform(p[1], 1, 0.0, 1.0)?];
    Patch::new(knots, hom.iter().map(|h| [h[0] / h[2], h[1] / h[2]]).collect(), hom.iter().map(|h| h[2]).collect())
}

/// Elevates a tensor Bézier patch (homogeneous net, `ξ1` fastest) to degrees `target`.
pub fn elevate_bezier_patch(p: [usize; 2], hom: &[[f64; 3]], target: [usize; 2]) -> Result<Patch> {
    if target[0] < p[0] || target[1] < p[1] {
        return Err(Error::InvalidGeometry("degree elevation cannot lower the degree".into()));
    }
    let (n0, n1) = (p[0] + 1, p[1] + 1);
    let rows: Vec<Vec<[f64; 3]>> =
        (0..n1).map(|j| elevate_bezier(&hom[j * n0..(j + 1) * n0], target[0] - p[0])).collect();
    let m0 = target[0] + 1;
    let mut cols: Vec<Vec<[f64; 3]>> = Vec::with_capacity(m0);
    for i in 0..m0 {
        let column: Vec<[f64; 3]> = rows.iter().map(|r| r[i]).collect();
        cols.push(elevate_bezier(&column, target[1] - p[1]));
    }
    let m1 = target[1] + 1;
    let mut net = Vec::with_capacity(m0 * m1);
    for j in 0..m1 {
        for col in &cols {
            net.push(col[j]);
        }
    }
    bezier_patch(target, &net)
}

/// Dense refinement matrix helper: rational weights after refinement `S`
/// (`N_old = S N_new`), `w_new = Sᵀ w_old`.
pub fn refined_weights(s: &Matrix<f64>, weights: &[f64]) -> Vec<f64> {
    s.transpose().mul_vec(weights).expect("weights match refinement rows")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter_annulus() -> Patch {
        let w = std::f64::consts::FRAC_1_SQRT_2;
        let hom: Vec<[f64; 3]> =
            [[1.0, 0.0, 1.0], [1.0, 1.0, w], [0.0, 1.0, 1.0], [2.0, 0.0, 1.0], [2.0, 2.0, w], [0.0, 2.0, 1.0]]
                .iter()
                .map(|&[x, y, w]| [x * w, y * w, w])
                .collect();
        bezier_patch([2, 1], &hom).unwrap()
    }

    #[test]
    fn arc_is_exact_and_survives_refinement() {
        let patch = quarter_annulus();
        let fine = patch.refine_uniform(2).unwrap();
        let elevated = elevate_bezier_patch(
            [2, 1],
            &patch.points().iter().zip(patch.weights()).map(|(p, w)| [p[0] * w, p[1] * w, *w]).collect::<Vec<_>>(),
            [3, 3],
        )
        .unwrap();
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            for s in [0.0, 0.3, 1.0] {
                let x = patch.eval([t, s]).unwrap();
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                assert!((r - (1.0 + s)).abs() < 1e-14);
                let y = fine.eval([t, s]).unwrap();
                let z = elevated.eval([t, s]).unwrap();
                assert!(distance(x, y) < 1e-14);
                assert!(distance(x, z) < 1e-14);
            }
        }
    }

    #[test]
    fn side_functions_follow_parameter_order() {
        let p = quarter_annulus().refine_uniform(1).unwrap();
        let f = p.side_functions(Side::Xi1);
        let c = p.side_curve(Side::Xi1).unwrap();
        assert_eq!(f.len(), c.points().len());
        let end = c.eval(1.0).unwrap();
        assert!(distance(end, p.eval([1.0, 1.0]).unwrap()) < 1e-14);
    }
}
