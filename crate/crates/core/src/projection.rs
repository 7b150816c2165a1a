//! Bézier projection weights and the local dual basis built from them.
//!
//! On element `e` the dual functions are `N̄ᵉ = Dᵉ Bᵉ` with
//! `Dᵉ = diag(ωᵉ) (Rᵉ)ᵀ (G_BB)⁻¹`, where `Rᵉ = (Cᵉ)⁻¹` and `G_BB` is the
//! Bernstein Gram matrix of the element. The global dual function `N̄_I` is the
//! sum of its element pieces and satisfies `∫ N̄_I N_J = δ_IJ`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spline::bernstein::{bernstein_gram, bernstein_unit, bernstein_unit_derivative};
use crate::spline::extraction::{extraction_operators, ElementExtraction};
use crate::spline::knots::KnotVector;

/// Dual basis data on a single element.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElement<T> {
    pub extraction: ElementExtraction<T>,
    /// Projection weights `ωᵢᵉ = ∫_e Nᵢ / ∫ Nᵢ`, one per local function.
    pub weights: Vec<T>,
    /// Dual extraction operator `Dᵉ`, rows local dual functions, columns Bernstein.
    pub operator: Matrix<T>,
}

impl<T: Scalar> DualElement<T> {
    pub fn lo(&self) -> &T {
        &self.extraction.span.lo
    }

    pub fn hi(&self) -> &T {
        &self.extraction.span.hi
    }

    pub fn first_function(&self) -> usize {
        self.extraction.span.first_function
    }
}

/// Integrals `∫ Nᵢ` of every basis function, computed exactly from extraction.
pub fn basis_integrals<T: Scalar>(kv: &KnotVector<T>) -> Vec<T> {
    let p = kv.degree();
    let mut out = vec![T::zero(); kv.num_basis()];
    for ext in extraction_operators(kv) {
        let h = ext.span.hi.clone() - ext.span.lo.clone();
        let scale = h / T::from_int((p + 1) as i64);
        for (a, i) in ext.functions().enumerate() {
            let row_sum = ext.operator.row(a).iter().fold(T::zero(), |acc, c| acc + c.clone());
            out[i] = out[i].clone() + row_sum * scale.clone();
        }
    }
    out
}

/// Projection weights of every element, `ωᵢᵉ = ∫_e Nᵢ / ∫ Nᵢ`.
pub fn projection_weights<T: Scalar>(kv: &KnotVector<T>) -> Vec<Vec<T>> {
    let p = kv.degree();
    let totals = basis_integrals(kv);
    extraction_operators(kv)
        .iter()
        .map(|ext| {
            let h = ext.span.hi.clone() - ext.span.lo.clone();
            let scale = h / T::from_int((p + 1) as i64);
            ext.functions()
                .enumerate()
                .map(|(a, i)| {
                    let local = ext.operator.row(a).iter().fold(T::zero(), |acc, c| acc + c.clone()) * scale.clone();
                    local / totals[i].clone()
                })
                .collect()
        })
        .collect()
}

/// Dual extraction operator `Dᵉ = diag(ω) (Rᵉ)ᵀ (G_BB)⁻¹` in the Bernstein basis of
/// the element `[lo, hi]`.
pub fn dual_operator<T: Scalar>(extraction: &Matrix<T>, weights: &[T], lo: &T, hi: &T) -> Result<Matrix<T>> {
    let n = extraction.nrows();
    if extraction.ncols() != n || weights.len() != n {
        return Err(Error::DimensionMismatch("dual operator inputs".into()));
    }
    let p = n - 1;
    let h = hi.clone() - lo.clone();
    let reconstruction = extraction.inverse()?;
    let gram_inv = bernstein_gram(p, &h).inverse()?;
    reconstruction.transpose().matmul(&gram_inv).map(|m| m.scale_rows(weights))
}

/// Local dual basis of a B-spline space.
#[derive(Clone, Debug, PartialEq)]
pub struct DualBasis<T> {
    knots: KnotVector<T>,
    elements: Vec<DualElement<T>>,
}

impl<T: Scalar> DualBasis<T> {
    pub fn new(knots: &KnotVector<T>) -> Result<Self> {
        let weights = projection_weights(knots);
        let elements = extraction_operators(knots)
            .into_iter()
            .zip(weights)
            .map(|(extraction, weights)| {
                let operator = dual_operator(&extraction.operator, &weights, &extraction.span.lo, &extraction.span.hi)?;
                Ok(DualElement { extraction, weights, operator })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { knots: knots.clone(), elements })
    }

    pub fn knots(&self) -> &KnotVector<T> {
        &self.knots
    }

    pub fn elements(&self) -> &[DualElement<T>] {
        &self.elements
    }

    pub fn num_functions(&self) -> usize {
        self.knots.num_basis()
    }

    /// Values of the `p + 1` dual functions active at `xi`, with the index of
    /// the first one.
    pub fn eval(&self, xi: &T) -> Result<(usize, Vec<T>)> {
        let e = self.knots.find_element(xi)?;
        let el = &self.elements[e];
        let h = el.hi().clone() - el.lo().clone();
        let t = (xi.clone() - el.lo().clone()) / h;
        let b = bernstein_unit(self.knots.degree(), &t);
        Ok((el.first_function(), el.operator.mul_vec(&b)?))
    }

    /// Values and derivatives of the active dual functions at `xi`.
    pub fn eval_with_derivative(&self, xi: &T) -> Result<(usize, Vec<T>, Vec<T>)> {
        let e = self.knots.find_element(xi)?;
        let el = &self.elements[e];
        let h = el.hi().clone() - el.lo().clone();
        let t = (xi.clone() - el.lo().clone()) / h.clone();
        let p = self.knots.degree();
        let b = bernstein_unit(p, &t);
        let db: Vec<T> = bernstein_unit_derivative(p, &t).into_iter().map(|d| d / h.clone()).collect();
        Ok((el.first_function(), el.operator.mul_vec(&b)?, el.operator.mul_vec(&db)?))
    }

    /// Rational dual functions `R̄_I = W N̄_I` at `xi`, biorthogonal to the
    /// rational functions `N_J / W` with `W = Σ wᵢ Nᵢ`.
    pub fn eval_rational(&self, xi: &T, weights: &[T]) -> Result<(usize, Vec<T>)> {
        let w = self.weight_function(xi, weights)?;
        let (first, vals) = self.eval(xi)?;
        Ok((first, vals.into_iter().map(|v| v * w.clone()).collect()))
    }

    /// Dual functions `W N̄_I / w_I`, biorthogonal to the NURBS analysis basis
    /// `w_J N_J / W`.
    pub fn eval_nurbs(&self, xi: &T, weights: &[T]) -> Result<(usize, Vec<T>)> {
        let w = self.weight_function(xi, weights)?;
        let (first, vals) = self.eval(xi)?;
        Ok((first, vals.into_iter().enumerate().map(|(k, v)| v * w.clone() / weights[first + k].clone()).collect()))
    }

    fn weight_function(&self, xi: &T, weights: &[T]) -> Result<T> {
        if weights.len() != self.num_functions() {
            return Err(Error::DimensionMismatch("one weight per basis function is required".into()));
        }
        let (first, n) = self.knots.basis(xi)?;
        Ok(n.into_iter().enumerate().fold(T::zero(), |acc, (k, v)| acc + v * weights[first + k].clone()))
    }

    /// Assembled matrix `∫ N̄_I N_J`, computed exactly from the element operators.
    pub fn biorthogonality_matrix(&self) -> Result<Matrix<T>> {
        let n = self.num_functions();
        let p = self.knots.degree();
        let mut out = Matrix::<T>::zeros(n, n);
        for el in &self.elements {
            let h = el.hi().clone() - el.lo().clone();
            let local = el.operator.matmul(&bernstein_gram(p, &h))?.matmul(&el.extraction.operator.transpose())?;
            let f = el.first_function();
            for a in 0..=p {
                for b in 0..=p {
                    out[(f + a, f + b)] = out[(f + a, f + b)].clone() + local[(a, b)].clone();
                }
            }
        }
        Ok(out)
    }
}
