//! Finite element assembly and solution on extracted meshes.

pub mod assembly;
pub mod boundary;
pub mod elasticity;
pub mod hyperelastic;
pub mod poisson;
pub mod system;

pub use assembly::{field_at, integrate, l2_error};
pub use boundary::{boundary_load, dirichlet_projection, side_points, to_reduced};
pub use elasticity::{assemble_elasticity, stress_at, LinearElastic};
pub use hyperelastic::{assemble_neo_hookean, solve_load_stepping, LoadStepping, NeoHookean};
pub use poisson::assemble_poisson;
pub use system::{apply_dirichlet, condense, expand_components, linear_solve, AssembledSystem, Constraints};
