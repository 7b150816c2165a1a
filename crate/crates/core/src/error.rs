use thiserror::Error;

/// Errors raised by the spline, coupling and finite element layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter {value} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error("degenerate interval [{lo}, {hi}]")]
    DegenerateInterval { lo: f64, hi: f64 },

    #[error("invalid knot vector: {0}")]
    InvalidKnotVector(String),

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("interface curves do not coincide: {0}")]
    NonCoincidentInterface(String),

    #[error("invalid interface definition: {0}")]
    InvalidInterface(String),

    #[error("degree of freedom {dof} is a slave on more than one interface")]
    ChainedDependency { dof: usize },

    #[error("conflicting Dirichlet values for degree of freedom {dof}: {first} vs {second}")]
    ConflictingConstraint { dof: usize, first: f64, second: f64 },

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("element {element} is inverted (det F = {det})")]
    ElementInversion { element: usize, det: f64 },

    #[error("degenerate geometry mapping in element {element} (det J = {det})")]
    DegenerateJacobian { element: usize, det: f64 },

    #[error("Newton iteration did not converge at load increment {increment} (relative residual {residual:e})")]
    NewtonDivergence { increment: usize, residual: f64 },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
