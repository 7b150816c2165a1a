//! Small-strain linear elasticity in two dimensions.

use crate::error::Result;
use crate::geometry::Point;
use crate::mesh::ExtractedMesh;

use super::assembly::{assemble, field_at, stiffness_points, vector_dofs, LocalContribution};
use super::system::AssembledSystem;

/// Isotropic linear elastic material.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearElastic {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub plane_strain: bool,
}

impl LinearElastic {
    /// Lamé parameters `(λ, μ)`, with `λ` adjusted for plane stress.
    pub fn lame(&self) -> (f64, f64) {
        let (e, nu) = (self.youngs_modulus, self.poisson_ratio);
        let mu = e / (2.0 * (1.0 + nu));
        let lambda =
            if self.plane_strain { e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)) } else { e * nu / (1.0 - nu * nu) };
        (lambda, mu)
    }

    /// Stress `[σxx, σyy, σxy]` for the strain `[εxx, εyy, 2εxy]`.
    pub fn stress(&self, strain: [f64; 3]) -> [f64; 3] {
        let (l, m) = self.lame();
        let tr = strain[0] + strain[1];
        [l * tr + 2.0 * m * strain[0], l * tr + 2.0 * m * strain[1], m * strain[2]]
    }
}

/// Stiffness `∫ ε(φ_a) : σ(φ_b)` and body load `∫ b · φ_a`, DOFs interleaved.
pub fn assemble_elasticity<F>(mesh: &ExtractedMesh, material: &LinearElastic, body: F) -> Result<AssembledSystem>
where
    F: Fn(Point) -> [f64; 2] + Sync,
{
    let (lambda, mu) = material.lame();
    assemble(mesh, 2, |_, el| {
        let n = el.dofs.len();
        let m = 2 * n;
        let mut k = vec![0.0; m * m];
        let mut f = vec![0.0; m];
        for (xi, w) in el.quadrature(stiffness_points(el)) {
            let pt = el.eval(xi)?;
            let dw = w * pt.det_j.abs();
            let b = body(pt.x);
            for a in 0..n {
                f[2 * a] += dw * b[0] * pt.values[a];
                f[2 * a + 1] += dw * b[1] * pt.values[a];
                let ga = pt.grads[a];
                for c in 0..n {
                    let gc = pt.grads[c];
                    // Blocks of B_aᵀ D B_c.
                    let kxx = (lambda + 2.0 * mu) * ga[0] * gc[0] + mu * ga[1] * gc[1];
                    let kxy = lambda * ga[0] * gc[1] + mu * ga[1] * gc[0];
                    let kyx = lambda * ga[1] * gc[0] + mu * ga[0] * gc[1];
                    let kyy = (lambda + 2.0 * mu) * ga[1] * gc[1] + mu * ga[0] * gc[0];
                    k[(2 * a) * m + 2 * c] += dw * kxx;
                    k[(2 * a) * m + 2 * c + 1] += dw * kxy;
                    k[(2 * a + 1) * m + 2 * c] += dw * kyx;
                    k[(2 * a + 1) * m + 2 * c + 1] += dw * kyy;
                }
            }
        }
        Ok(LocalContribution { dofs: vector_dofs(&el.dofs, 2), matrix: k, vector: f })
    })
}

/// Stress `[σxx, σyy, σxy]` of a displacement field at a point of an element.
pub fn stress_at(
    material: &LinearElastic,
    el: &crate::mesh::ExtractedElement,
    pt: &crate::mesh::ElementPoint,
    coeffs: &[f64],
) -> [f64; 3] {
    let (_, g) = field_at(el, pt, coeffs, 2);
    material.stress([g[0][0], g[1][1], g[0][1] + g[1][0]])
}
