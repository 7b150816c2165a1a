//! Plane-strain Neo-Hookean hyperelasticity in the total Lagrangian setting,
//! solved by Newton's method with load stepping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{ElementPoint, ExtractedMesh};

use super::assembly::{assemble, integrate, stiffness_points, vector_dofs, LocalContribution};
use super::system::{apply_dirichlet, linear_solve, AssembledSystem, Constraints};

/// Second-order tensor in two dimensions, `t[i][j]`.
pub type Tensor2 = [[f64; 2]; 2];

/// Fourth-order tensor `a[i][j][k][l]`.
pub type Tensor4 = [[[[f64; 2]; 2]; 2]; 2];

/// Neo-Hookean material with strain energy
/// `ψ = λ (¼ (J² − 1) − ½ ln J) + ½ μ (tr b − 3 − 2 ln J)` under plane strain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeoHookean {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
}

fn det(f: &Tensor2) -> f64 {
    f[0][0] * f[1][1] - f[0][1] * f[1][0]
}

fn inverse(f: &Tensor2) -> Tensor2 {
    let j = det(f);
    [[f[1][1] / j, -f[0][1] / j], [-f[1][0] / j, f[0][0] / j]]
}

impl NeoHookean {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64) -> Result<Self> {
        if !(youngs_modulus > 0.0) || !(poisson_ratio > -1.0 && poisson_ratio < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "Neo-Hookean material needs E > 0 and -1 < ν < 0.5, got E = {youngs_modulus}, ν = {poisson_ratio}"
            )));
        }
        Ok(Self { youngs_modulus, poisson_ratio })
    }

    /// Lamé parameters `(λ, μ)`.
    pub fn lame(&self) -> (f64, f64) {
        let (e, nu) = (self.youngs_modulus, self.poisson_ratio);
        (e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu)))
    }

    /// Strain energy density for the in-plane deformation gradient `f`.
    /// The out-of-plane stretch is one, so `tr b = |f|² + 1`.
    pub fn energy(&self, f: &Tensor2) -> f64 {
        let (lambda, mu) = self.lame();
        let j = det(f);
        let tr_b = f.iter().flatten().map(|v| v * v).sum::<f64>() + 1.0;
        lambda * (0.25 * (j * j - 1.0) - 0.5 * j.ln()) + 0.5 * mu * (tr_b - 3.0 - 2.0 * j.ln())
    }

    /// First Piola–Kirchhoff stress `P = ∂ψ/∂F`.
    pub fn stress(&self, f: &Tensor2) -> Tensor2 {
        let (lambda, mu) = self.lame();
        let j = det(f);
        let fi = inverse(f);
        let c = 0.5 * lambda * (j * j - 1.0);
        let mut p = [[0.0; 2]; 2];
        for i in 0..2 {
            for jj in 0..2 {
                p[i][jj] = c * fi[jj][i] + mu * (f[i][jj] - fi[jj][i]);
            }
        }
        p
    }

    /// Material tangent `A = ∂P/∂F`.
    pub fn tangent(&self, f: &Tensor2) -> Tensor4 {
        let (lambda, mu) = self.lame();
        let j = det(f);
        let fi = inverse(f);
        let c = 0.5 * lambda * (j * j - 1.0) - mu;
        let mut a = [[[[0.0; 2]; 2]; 2]; 2];
        for i in 0..2 {
            for jj in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let delta = if i == k && jj == l { mu } else { 0.0 };
                        a[i][jj][k][l] = lambda * j * j * fi[l][k] * fi[jj][i] - c * fi[jj][k] * fi[l][i] + delta;
                    }
                }
            }
        }
        a
    }
}

/// Deformation gradient `F = I + ∇u` of an interleaved displacement field.
fn deformation_gradient(dofs: &[usize], pt: &ElementPoint, u: &[f64]) -> Tensor2 {
    let mut f = [[1.0, 0.0], [0.0, 1.0]];
    for (k, &d) in dofs.iter().enumerate() {
        for (i, row) in f.iter_mut().enumerate() {
            row[0] += u[2 * d + i] * pt.grads[k][0];
            row[1] += u[2 * d + i] * pt.grads[k][1];
        }
    }
    f
}

/// Tangent stiffness (`matrix`) and internal force vector (`rhs`) at the
/// displacement `u`.
///
/// Fails with [`Error::ElementInversion`] if `det F ≤ 0` at a quadrature point.
pub fn assemble_neo_hookean(mesh: &ExtractedMesh, material: &NeoHookean, u: &[f64]) -> Result<AssembledSystem> {
    if u.len() != 2 * mesh.num_dofs {
        return Err(Error::DimensionMismatch(format!(
            "displacement of length {} on a mesh with {} DOFs",
            u.len(),
            mesh.num_dofs
        )));
    }
    assemble(mesh, 2, |e, el| {
        let n = el.dofs.len();
        let m = 2 * n;
        let mut k = vec![0.0; m * m];
        let mut r = vec![0.0; m];
        for (xi, w) in el.quadrature(stiffness_points(el)) {
            let pt = el.eval(xi)?;
            let f = deformation_gradient(&el.dofs, &pt, u);
            let j = det(&f);
            if !(j > 0.0) {
                return Err(Error::ElementInversion { element: e, det: j });
            }
            let p = material.stress(&f);
            let a = material.tangent(&f);
            let dw = w * pt.det_j.abs();
            for ia in 0..n {
                let ga = pt.grads[ia];
                for i in 0..2 {
                    r[2 * ia + i] += dw * (p[i][0] * ga[0] + p[i][1] * ga[1]);
                }
                // g_aJ A_iJkL, contracted over J.
                let mut ga_a = [[[0.0; 2]; 2]; 2];
                for i in 0..2 {
                    for kk in 0..2 {
                        for l in 0..2 {
                            ga_a[i][kk][l] = ga[0] * a[i][0][kk][l] + ga[1] * a[i][1][kk][l];
                        }
                    }
                }
                for ib in 0..n {
                    let gb = pt.grads[ib];
                    for i in 0..2 {
                        for kk in 0..2 {
                            let v = ga_a[i][kk][0] * gb[0] + ga_a[i][kk][1] * gb[1];
                            k[(2 * ia + i) * m + 2 * ib + kk] += dw * v;
                        }
                    }
                }
            }
        }
        Ok(LocalContribution { dofs: vector_dofs(&el.dofs, 2), matrix: k, vector: r })
    })
}

/// Total strain energy `∫ ψ(F) dX` of the displacement `u`.
pub fn strain_energy(mesh: &ExtractedMesh, material: &NeoHookean, u: &[f64]) -> Result<f64> {
    integrate(mesh, 0, |el, pt| {
        let f = deformation_gradient(&el.dofs, pt, u);
        Ok(material.energy(&f))
    })
}

/// Newton load-stepping controls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoadStepping {
    /// Number of equal load increments.
    pub increments: usize,
    /// An increment has converged once the residual norm dropped by this
    /// factor from its value at the start of the increment.
    pub tol_factor: f64,
    /// Newton iterations allowed per increment.
    pub max_iter: usize,
}

impl Default for LoadStepping {
    fn default() -> Self {
        Self { increments: 20, tol_factor: 1e8, max_iter: 25 }
    }
}

/// Converged state after the final increment.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperelasticSolution {
    pub displacement: Vec<f64>,
    /// Newton iterations spent on each increment.
    pub iterations: Vec<usize>,
}

/// Solves `f_int(u) = f_ext` for a dead load `external`, applied in equal
/// increments, with the interleaved DOFs in `fixed` held at zero.
pub fn solve_load_stepping(
    mesh: &ExtractedMesh,
    material: &NeoHookean,
    external: &[f64],
    fixed: &Constraints,
    options: &LoadStepping,
) -> Result<HyperelasticSolution> {
    let n = 2 * mesh.num_dofs;
    if external.len() != n {
        return Err(Error::DimensionMismatch(format!("load vector of length {} for {n} unknowns", external.len())));
    }
    if options.increments == 0 {
        return Err(Error::InvalidConfig("at least one load increment is needed".into()));
    }
    let zero = fixed.scaled(0.0);
    let mut u = vec![0.0; n];
    let mut iterations = Vec::with_capacity(options.increments);
    for step in 1..=options.increments {
        let scale = step as f64 / options.increments as f64;
        let mut initial = None;
        let mut converged = false;
        let mut last = 0.0;
        for iter in 0..=options.max_iter {
            let system = assemble_neo_hookean(mesh, material, &u)?;
            let mut residual: Vec<f64> = system.rhs.iter().zip(external).map(|(fi, fe)| fi - scale * fe).collect();
            for (d, _) in fixed.iter() {
                residual[d] = 0.0;
            }
            let norm = residual.iter().map(|v| v * v).sum::<f64>().sqrt();
            last = norm;
            let r0 = *initial.get_or_insert(norm);
            if norm == 0.0 || norm <= r0 / options.tol_factor {
                iterations.push(iter);
                converged = true;
                break;
            }
            if iter == options.max_iter {
                break;
            }
            let rhs = residual.iter().map(|v| -v).collect();
            let du = linear_solve(&apply_dirichlet(&AssembledSystem { matrix: system.matrix, rhs }, &zero)?)?;
            for (ui, di) in u.iter_mut().zip(&du) {
                *ui += di;
            }
        }
        if !converged {
            return Err(Error::NewtonDivergence { increment: step, residual: last });
        }
    }
    Ok(HyperelasticSolution { displacement: u, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn material() -> NeoHookean {
        NeoHookean::new(30e9, 0.48).unwrap()
    }

    #[test]
    fn reference_state_is_stress_free() {
        let p = material().stress(&[[1.0, 0.0], [0.0, 1.0]]);
        assert!(p.iter().flatten().all(|v| v.abs() < 1e-6));
        assert_eq!(material().energy(&[[1.0, 0.0], [0.0, 1.0]]), 0.0);
    }

    #[test]
    fn volumetric_stretch_energy() {
        let m = material();
        let (lambda, mu) = m.lame();
        let c: f64 = 1.1;
        let j = c * c;
        let expected =
            lambda * (0.25 * (j * j - 1.0) - 0.5 * j.ln()) + 0.5 * mu * (2.0 * c * c + 1.0 - 3.0 - 2.0 * j.ln());
        assert!((m.energy(&[[c, 0.0], [0.0, c]]) - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn stress_is_energy_gradient() {
        let m = material();
        let f = [[1.1, 0.2], [-0.1, 0.9]];
        let p = m.stress(&f);
        let h = 1e-6;
        for i in 0..2 {
            for j in 0..2 {
                let mut fp = f;
                let mut fm = f;
                fp[i][j] += h;
                fm[i][j] -= h;
                let fd = (m.energy(&fp) - m.energy(&fm)) / (2.0 * h);
                assert!((fd - p[i][j]).abs() <= 1e-6 * p[i][j].abs().max(m.lame().1));
            }
        }
    }

    #[test]
    fn tangent_is_stress_gradient() {
        let m = material();
        let f = [[1.1, 0.2], [-0.1, 0.9]];
        let a = m.tangent(&f);
        let h = 1e-7;
        for k in 0..2 {
            for l in 0..2 {
                let mut fp = f;
                let mut fm = f;
                fp[k][l] += h;
                fm[k][l] -= h;
                let (pp, pm) = (m.stress(&fp), m.stress(&fm));
                for i in 0..2 {
                    for j in 0..2 {
                        let fd = (pp[i][j] - pm[i][j]) / (2.0 * h);
                        assert!((fd - a[i][j][k][l]).abs() <= 1e-6 * m.lame().0);
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_material_is_rejected() {
        assert!(NeoHookean::new(1.0, 0.5).is_err());
        assert!(NeoHookean::new(-1.0, 0.3).is_err());
    }
}
