//! Assembled linear systems, static condensation and Dirichlet constraints.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{solve_symmetric, CsrMatrix, TripletBuilder};

/// Relative residual accepted by [`linear_solve`].
pub const SOLVE_TOL: f64 = 1e-10;

/// Global matrix and right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct AssembledSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

impl AssembledSystem {
    pub fn size(&self) -> usize {
        self.rhs.len()
    }
}

/// Expands a scalar prolongation `T` to `ncomp` interleaved components.
pub fn expand_components(t: &CsrMatrix, ncomp: usize) -> CsrMatrix {
    if ncomp == 1 {
        return t.clone();
    }
    let mut b = TripletBuilder::new(t.nrows() * ncomp, t.ncols() * ncomp);
    for (i, j, v) in t.iter() {
        for c in 0..ncomp {
            b.push(ncomp * i + c, ncomp * j + c, v);
        }
    }
    b.build()
}

/// Condenses a broken system with the prolongation `T`: `Tᵀ K T`, `Tᵀ f`.
pub fn condense(system: &AssembledSystem, t: &CsrMatrix) -> Result<AssembledSystem> {
    if t.nrows() != system.size() {
        return Err(Error::DimensionMismatch(format!(
            "prolongation has {} rows for a system of size {}",
            t.nrows(),
            system.size()
        )));
    }
    Ok(AssembledSystem { matrix: system.matrix.congruence(t)?, rhs: t.tr_mul_vec(&system.rhs) })
}

/// Prescribed values of individual degrees of freedom.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Constraints {
    values: BTreeMap<usize, f64>,
}

impl Constraints {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a constraint; a second, different value for the same DOF is an error.
    pub fn add(&mut self, dof: usize, value: f64) -> Result<()> {
        if let Some(&old) = self.values.get(&dof) {
            if (old - value).abs() > 1e-10 * (1.0 + old.abs().max(value.abs())) {
                return Err(Error::ConflictingConstraint { dof, first: old, second: value });
            }
            return Ok(());
        }
        self.values.insert(dof, value);
        Ok(())
    }

    pub fn extend(&mut self, other: &Constraints) -> Result<()> {
        for (&d, &v) in &other.values {
            self.add(d, v)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, dof: usize) -> Option<f64> {
        self.values.get(&dof).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().map(|(&d, &v)| (d, v))
    }

    /// Maps constraints through an index map, dropping DOFs without an image.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> Result<Self> {
        let mut out = Self::new();
        for (d, v) in self.iter() {
            if let Some(n) = map(d) {
                out.add(n, v)?;
            }
        }
        Ok(out)
    }

    /// Scales all values (used for load stepping of prescribed displacements).
    pub fn scaled(&self, s: f64) -> Self {
        Self { values: self.values.iter().map(|(&d, &v)| (d, v * s)).collect() }
    }
}

/// Eliminates constrained DOFs symmetrically: their rows and columns become
/// identity and the known values move to the right-hand side.
pub fn apply_dirichlet(system: &AssembledSystem, constraints: &Constraints) -> Result<AssembledSystem> {
    let n = system.size();
    let mut fixed = vec![None; n];
    for (d, v) in constraints.iter() {
        if d >= n {
            return Err(Error::DimensionMismatch(format!("constraint on DOF {d} of a system of size {n}")));
        }
        fixed[d] = Some(v);
    }
    let mut rhs = system.rhs.clone();
    let mut b = TripletBuilder::new(n, n);
    for (i, j, v) in system.matrix.iter() {
        match (fixed[i], fixed[j]) {
            (None, None) => b.push(i, j, v),
            (None, Some(uj)) => rhs[i] -= v * uj,
            _ => {}
        }
    }
    for (i, f) in fixed.iter().enumerate() {
        if let Some(u) = f {
            b.push(i, i, 1.0);
            rhs[i] = *u;
        }
    }
    Ok(AssembledSystem { matrix: b.build(), rhs })
}

/// Solves a symmetric system with the sparse LDLᵀ factorization and checks
/// the residual.
pub fn linear_solve(system: &AssembledSystem) -> Result<Vec<f64>> {
    solve_symmetric(&system.matrix, &system.rhs, SOLVE_TOL)
}
