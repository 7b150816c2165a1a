//! Scalar Poisson problem `-Δu = f`.

use crate::error::Result;
use crate::geometry::Point;
use crate::mesh::ExtractedMesh;

use super::assembly::{assemble, stiffness_points, LocalContribution};
use super::system::AssembledSystem;

/// Stiffness matrix `∫ ∇φ_a · ∇φ_b` and load `∫ f φ_a`.
pub fn assemble_poisson<F>(mesh: &ExtractedMesh, source: F) -> Result<AssembledSystem>
where
    F: Fn(Point) -> f64 + Sync,
{
    assemble(mesh, 1, |_, el| {
        let n = el.dofs.len();
        let mut k = vec![0.0; n * n];
        let mut f = vec![0.0; n];
        for (xi, w) in el.quadrature(stiffness_points(el)) {
            let pt = el.eval(xi)?;
            let dw = w * pt.det_j.abs();
            let s = source(pt.x);
            for a in 0..n {
                f[a] += dw * s * pt.values[a];
                let ga = pt.grads[a];
                for b in 0..n {
                    let gb = pt.grads[b];
                    k[a * n + b] += dw * (ga[0] * gb[0] + ga[1] * gb[1]);
                }
            }
        }
        Ok(LocalContribution { dofs: el.dofs.clone(), matrix: k, vector: f })
    })
}
