//! Mortar coupling between non-conforming patches.

pub mod coupling;
pub mod discretization;
pub mod jump;
pub mod map;
pub mod refine;
pub mod saddle;

pub use coupling::{coupling_matrix_affine, coupling_matrix_nurbs, AffineMap};
pub use discretization::{
    Discretization, DofRole, Enrichment, InterfaceCoupling, MortarOptions, PatchSpace, SlaveGroup,
};
pub use jump::interface_jump;
pub use map::{InterfaceMap, NewtonOptions};
pub use refine::{merge_breakpoints, refined_interface_knots};
pub use saddle::{constraint_matrix, solve_saddle};
