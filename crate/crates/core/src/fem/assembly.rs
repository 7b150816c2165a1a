//! Element loops over extracted meshes.

use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::Point;
use crate::linalg::TripletBuilder;
use crate::mesh::{ElementPoint, ExtractedElement, ExtractedMesh};

use super::system::AssembledSystem;

/// Local matrix and vector of one element, with global row indices.
pub struct LocalContribution {
    pub dofs: Vec<usize>,
    pub matrix: Vec<f64>,
    pub vector: Vec<f64>,
}

/// Number of Gauss points per direction for stiffness integrals.
pub fn stiffness_points(el: &ExtractedElement) -> [usize; 2] {
    [el.degree[0] + 1, el.degree[1] + 1]
}

/// Interleaved global indices `ncomp * dof + c`.
pub fn vector_dofs(dofs: &[usize], ncomp: usize) -> Vec<usize> {
    dofs.iter().flat_map(|&d| (0..ncomp).map(move |c| ncomp * d + c)).collect()
}

/// Runs `local` on every element (with its index) in parallel and sums the
/// results in element order.
pub fn assemble<F>(mesh: &ExtractedMesh, ncomp: usize, local: F) -> Result<AssembledSystem>
where
    F: Fn(usize, &ExtractedElement) -> Result<LocalContribution> + Sync,
{
    let n = mesh.num_dofs * ncomp;
    let parts: Vec<LocalContribution> =
        mesh.elements.par_iter().enumerate().map(|(e, el)| local(e, el)).collect::<Result<_>>()?;
    let mut b = TripletBuilder::new(n, n);
    let mut rhs = vec![0.0; n];
    for part in parts {
        let m = part.dofs.len();
        for (a, &ga) in part.dofs.iter().enumerate() {
            rhs[ga] += part.vector[a];
            for (c, &gc) in part.dofs.iter().enumerate() {
                let v = part.matrix[a * m + c];
                if v != 0.0 {
                    b.push(ga, gc, v);
                }
            }
        }
    }
    Ok(AssembledSystem { matrix: b.build(), rhs })
}

/// Evaluates `integrand` at every quadrature point of every cell and sums
/// `weight * |det J| * integrand`.
pub fn integrate<F>(mesh: &ExtractedMesh, points_extra: usize, integrand: F) -> Result<f64>
where
    F: Fn(&ExtractedElement, &ElementPoint) -> Result<f64> + Sync,
{
    let parts: Vec<f64> = mesh
        .elements
        .par_iter()
        .map(|el| {
            let q = [el.degree[0] + 1 + points_extra, el.degree[1] + 1 + points_extra];
            let mut acc = 0.0;
            for (xi, w) in el.quadrature(q) {
                let pt = el.eval(xi)?;
                acc += w * pt.det_j.abs() * integrand(el, &pt)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

/// Field value and gradient of an interleaved `ncomp`-vector field at a point.
pub fn field_at(el: &ExtractedElement, pt: &ElementPoint, coeffs: &[f64], ncomp: usize) -> (Vec<f64>, Vec<[f64; 2]>) {
    let mut v = vec![0.0; ncomp];
    let mut g = vec![[0.0; 2]; ncomp];
    for (k, &d) in el.dofs.iter().enumerate() {
        for c in 0..ncomp {
            let u = coeffs[ncomp * d + c];
            v[c] += u * pt.values[k];
            g[c][0] += u * pt.grads[k][0];
            g[c][1] += u * pt.grads[k][1];
        }
    }
    (v, g)
}

/// `L2` norm of the error of an `ncomp`-vector field against `exact`, and the
/// `L2` norm of `exact`.
pub fn l2_error<F>(mesh: &ExtractedMesh, coeffs: &[f64], ncomp: usize, exact: F) -> Result<(f64, f64)>
where
    F: Fn(Point) -> Vec<f64> + Sync,
{
    let err = integrate(mesh, 2, |el, pt| {
        let (v, _) = field_at(el, pt, coeffs, ncomp);
        let ex = exact(pt.x);
        Ok(v.iter().zip(&ex).map(|(a, b)| (a - b).powi(2)).sum())
    })?;
    let norm = integrate(mesh, 2, |_, pt| Ok(exact(pt.x).iter().map(|v| v * v).sum()))?;
    Ok((err.sqrt(), norm.sqrt()))
}
