//! Boundary integrals and Dirichlet data on patch sides.

use crate::error::{Error, Result};
use crate::geometry::{PatchSide, Point};
use crate::linalg::Matrix;
use crate::mesh::{ElementPoint, ExtractedMesh};
use crate::mortar::Discretization;
use crate::quadrature::GaussRule;

use super::system::Constraints;

/// A quadrature point on a patch side.
pub struct SidePoint<'a> {
    pub element: &'a crate::mesh::ExtractedElement,
    pub point: ElementPoint,
    /// Quadrature weight times the arc-length factor.
    pub weight: f64,
    /// Unit outward normal.
    pub normal: [f64; 2],
    /// Parameter along the side.
    pub t: f64,
}

/// Quadrature points along `side`, optionally restricted to the side
/// parameter range `range`.
pub fn side_points<'a>(
    mesh: &'a ExtractedMesh,
    side: PatchSide,
    range: Option<(f64, f64)>,
    extra_points: usize,
) -> Result<Vec<SidePoint<'a>>> {
    let domain = *mesh
        .patch_domains
        .get(side.patch)
        .ok_or_else(|| Error::InvalidConfig(format!("patch {} does not exist", side.patch)))?;
    let t = side.side.tangent_dir();
    let d = side.side.normal_dir();
    let fixed = domain[d][usize::from(side.side.is_upper())];
    let mut out = Vec::new();
    for el in mesh.elements.iter().filter(|e| e.patch == side.patch && e.touches(side.side, domain)) {
        let (mut a, mut b) = (el.cell_box[t][0], el.cell_box[t][1]);
        if let Some((r0, r1)) = range {
            a = a.max(r0);
            b = b.min(r1);
        }
        if b <= a {
            continue;
        }
        let rule = GaussRule::new(el.degree[t] + 1 + extra_points);
        for (s, w) in rule.on_interval(a, b) {
            let mut xi = [0.0; 2];
            xi[t] = s;
            xi[d] = fixed;
            let point = el.eval(xi)?;
            let tan = [point.jacobian[0][t], point.jacobian[1][t]];
            let inward_sign = if side.side.is_upper() { -1.0 } else { 1.0 };
            let inward = [inward_sign * point.jacobian[0][d], inward_sign * point.jacobian[1][d]];
            let len = (tan[0] * tan[0] + tan[1] * tan[1]).sqrt();
            let mut normal = [tan[1] / len, -tan[0] / len];
            if normal[0] * inward[0] + normal[1] * inward[1] > 0.0 {
                normal = [-normal[0], -normal[1]];
            }
            out.push(SidePoint { element: el, point, weight: w * len, normal, t: s });
        }
    }
    Ok(out)
}

/// Load vector `∫ g · φ ds` of an `ncomp`-vector boundary flux or traction.
pub fn boundary_load<F>(
    mesh: &ExtractedMesh,
    ncomp: usize,
    side: PatchSide,
    range: Option<(f64, f64)>,
    load: F,
) -> Result<Vec<f64>>
where
    F: Fn(Point, [f64; 2]) -> Vec<f64>,
{
    let mut rhs = vec![0.0; mesh.num_dofs * ncomp];
    for sp in side_points(mesh, side, range, 1)? {
        let g = load(sp.point.x, sp.normal);
        for (k, &dof) in sp.element.dofs.iter().enumerate() {
            for c in 0..ncomp {
                rhs[ncomp * dof + c] += sp.weight * g[c] * sp.point.values[k];
            }
        }
    }
    Ok(rhs)
}

/// Dirichlet values for component `comp` on `side`, by `L2` projection of
/// `g` onto the side trace space with the end values interpolated.
///
/// Returns constraints on interleaved broken indices `ncomp * dof + comp`;
/// DOFs that are eliminated by the mortar coupling are left out.
pub fn dirichlet_projection<F>(
    disc: &Discretization,
    side: PatchSide,
    comp: usize,
    ncomp: usize,
    g: F,
) -> Result<Constraints>
where
    F: Fn(Point) -> f64,
{
    let patch = &disc.model.patches[side.patch];
    let curve = patch.side_curve(side.side)?;
    let dofs = disc.side_dofs(side)?;
    let n = dofs.len();
    let mut mass = Matrix::<f64>::zeros(n, n);
    let mut rhs = vec![0.0; n];
    let p = curve.knots().degree();
    let rule = GaussRule::new(p + 3);
    let bps = curve.knots().breakpoints();
    for w in bps.windows(2) {
        for (t, wt) in rule.on_interval(w[0], w[1]) {
            let (first, r, _) = curve.basis(t)?;
            let (x, dx) = curve.eval_with_tangent(t)?;
            let ds = wt * (dx[0] * dx[0] + dx[1] * dx[1]).sqrt();
            let gv = g(x);
            for (a, ra) in r.iter().enumerate() {
                rhs[first + a] += ds * gv * ra;
                for (b, rb) in r.iter().enumerate() {
                    mass[(first + a, first + b)] += ds * ra * rb;
                }
            }
        }
    }
    let (t0, t1) = curve.domain();
    let mut coeffs = vec![0.0; n];
    coeffs[0] = g(curve.eval(t0)?);
    coeffs[n - 1] = g(curve.eval(t1)?);
    if n > 2 {
        let inner: Vec<usize> = (1..n - 1).collect();
        let m_ii = mass.select_rows(&inner).select_cols(&inner);
        let b: Vec<f64> =
            inner.iter().map(|&i| rhs[i] - mass[(i, 0)] * coeffs[0] - mass[(i, n - 1)] * coeffs[n - 1]).collect();
        let c = m_ii.solve(&b)?;
        for (k, &i) in inner.iter().enumerate() {
            coeffs[i] = c[k];
        }
    }
    let mut out = Constraints::new();
    for (k, &dof) in dofs.iter().enumerate() {
        if disc.reduced_index[dof].is_some() {
            out.add(ncomp * dof + comp, coeffs[k])?;
        }
    }
    Ok(out)
}

/// Constraints on broken indices mapped to reduced indices.
pub fn to_reduced(disc: &Discretization, broken: &Constraints, ncomp: usize) -> Result<Constraints> {
    broken.remap(|d| disc.reduced_index[d / ncomp].map(|r| ncomp * r + d % ncomp))
}
