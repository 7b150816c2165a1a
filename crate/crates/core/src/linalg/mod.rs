//! Dense and sparse linear algebra.

pub mod dense;
pub mod ldl;
pub mod sparse;

pub use dense::Matrix;
pub use ldl::{reverse_cuthill_mckee, solve_symmetric, LdlFactor};
pub use sparse::{CsrMatrix, TripletBuilder};
