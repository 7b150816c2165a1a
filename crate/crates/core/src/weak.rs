//! Weakly continuous geometry: element operators that carry the mortar
//! constraint, so the coupled space can be assembled like a conforming one.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Weak interface operator `R̃ᵉ = (Gᵉ)ᵀ Cᵉ` of a slave interface element.
///
/// `g_e` holds the coupling entries of the slave functions on the element
/// (rows) and the master functions they depend on (columns); `c_e` is the
/// slave extraction operator of the element.
pub fn weak_interface_operator<T: Scalar>(g_e: &Matrix<T>, c_e: &Matrix<T>) -> Result<Matrix<T>> {
    g_e.transpose().matmul(c_e)
}

/// Weak interface operator of a quadrature cell of a dual-refined slave
/// element, `R̃ᵉ = (Gᵉ)ᵀ C^{e,r} M⁻ᵀ`, expressed in the Bernstein basis of the
/// parent element. `m` is the transform from the parent interval to the cell.
pub fn refined_weak_interface_operator<T: Scalar>(
    g_e: &Matrix<T>,
    c_er: &Matrix<T>,
    m: &Matrix<T>,
) -> Result<Matrix<T>> {
    g_e.transpose().matmul(c_er)?.matmul(&m.inverse()?.transpose())
}

/// Two-dimensional element operator of a slave element touching the
/// interface.
///
/// `transverse` is the extraction operator across the interface; its row
/// `interface_row` belongs to the function that does not vanish on the
/// interface. The other rows are combined with the ordinary operator `along`
/// and that row with the weak interface operator `weak_along`. Kronecker
/// products take the transverse direction as the outer factor; the rows of
/// the non-interface block come first.
pub fn tensor_weak_patch_operator<T: Scalar>(
    transverse: &Matrix<T>,
    interface_row: usize,
    along: &Matrix<T>,
    weak_along: &Matrix<T>,
) -> Result<Matrix<T>> {
    if interface_row >= transverse.nrows() || along.ncols() != weak_along.ncols() {
        return Err(Error::DimensionMismatch("weak patch operator inputs".into()));
    }
    let others: Vec<usize> = (0..transverse.nrows()).filter(|&r| r != interface_row).collect();
    let r1 = transverse.select_rows(&others);
    let r2 = transverse.select_rows(&[interface_row]);
    r1.kron(along).vstack(&r2.kron(weak_along))
}

/// Weakly continuous mesh of a mortar discretization.
///
/// Every cell of the broken mesh keeps its Bézier geometry; its operator
/// becomes `T_eᵀ E_e`, where `T_e` holds the rows of the prolongation for the
/// cell's broken DOFs. Slave interface functions are thereby replaced by the
/// master functions they depend on, and the global DOFs are the reduced ones.
/// Assembling on this mesh yields `Tᵀ K T`.
pub fn build_weak_mesh(disc: &crate::mortar::Discretization) -> Result<crate::mesh::ExtractedMesh> {
    let t = &disc.prolongation;
    let mut elements = Vec::with_capacity(disc.mesh.elements.len());
    for el in &disc.mesh.elements {
        let mut cols: Vec<usize> = el.dofs.iter().flat_map(|&d| t.row(d).0.iter().copied()).collect();
        cols.sort_unstable();
        cols.dedup();
        let nb = el.num_bernstein();
        let mut op = Matrix::<f64>::zeros(cols.len(), nb);
        for (k, &d) in el.dofs.iter().enumerate() {
            let (tc, tv) = t.row(d);
            let src = el.operator.row(k);
            for (&c, &v) in tc.iter().zip(tv) {
                let r = cols.binary_search(&c).expect("column collected above");
                for b in 0..nb {
                    op[(r, b)] += v * src[b];
                }
            }
        }
        let mut weak = el.clone();
        weak.dofs = cols;
        weak.operator = op;
        elements.push(weak);
    }
    Ok(crate::mesh::ExtractedMesh {
        elements,
        num_dofs: disc.num_reduced(),
        patch_domains: disc.mesh.patch_domains.clone(),
    })
}
