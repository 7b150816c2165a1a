//! Lagrange multiplier (saddle point) form of the mortar constraint, used as
//! a reference for the condensed formulation.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fem::system::{AssembledSystem, Constraints};
use crate::linalg::{CsrMatrix, TripletBuilder};

use super::discretization::Discretization;

/// Constraint matrix `B = [G, -I]` on interleaved broken DOFs: one row per
/// dependent DOF and component, `Σ_J G_KJ u_J - u_K = 0`.
pub fn constraint_matrix(disc: &Discretization, ncomp: usize) -> CsrMatrix {
    let rows: usize = disc.groups.iter().map(|g| g.slave_dofs.len()).sum::<usize>() * ncomp;
    let mut b = TripletBuilder::new(rows, disc.num_broken * ncomp);
    let mut r = 0;
    for g in &disc.groups {
        for (k, &dof) in g.slave_dofs.iter().enumerate() {
            for c in 0..ncomp {
                for cp in &g.couplings {
                    for (j, &m) in cp.master_dofs.iter().enumerate() {
                        let v = cp.matrix[(k, j)];
                        if v != 0.0 {
                            b.push(r, ncomp * m + c, v);
                        }
                    }
                }
                b.push(r, ncomp * dof + c, -1.0);
                r += 1;
            }
        }
    }
    b.build()
}

/// Solves `[K Bᵀ; B 0] [u; λ] = [f; 0]` densely, with Dirichlet constraints on
/// broken DOFs. Returns the broken solution.
pub fn solve_saddle(
    disc: &Discretization,
    system: &AssembledSystem,
    constraints: &Constraints,
    ncomp: usize,
) -> Result<Vec<f64>> {
    let n = system.size();
    let bmat = constraint_matrix(disc, ncomp);
    let m = bmat.nrows();
    let mut fixed = vec![None; n];
    for (d, v) in constraints.iter() {
        fixed[d] = Some(v);
    }
    let mut a = DMatrix::<f64>::zeros(n + m, n + m);
    let mut rhs = DVector::<f64>::zeros(n + m);
    for i in 0..n {
        rhs[i] = system.rhs[i];
    }
    for (i, j, v) in system.matrix.iter() {
        match (fixed[i], fixed[j]) {
            (None, None) => a[(i, j)] += v,
            (None, Some(u)) => rhs[i] -= v * u,
            _ => {}
        }
    }
    for (i, f) in fixed.iter().enumerate() {
        if let Some(u) = f {
            a[(i, i)] = 1.0;
            rhs[i] = *u;
        }
    }
    for (r, j, v) in bmat.iter() {
        match fixed[j] {
            None => {
                a[(n + r, j)] += v;
                a[(j, n + r)] += v;
            }
            Some(u) => rhs[n + r] -= v * u,
        }
    }
    let sol = a.lu().solve(&rhs).ok_or_else(|| Error::SingularSystem("saddle point matrix is singular".into()))?;
    Ok(sol.as_slice()[..n].to_vec())
}
