//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by mesh construction, assembly, and the solvers.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("quadrature point count {requested} out of range (must be 1..={cap})")]
    InvalidQuadrature { requested: usize, cap: usize },

    #[error("polynomial degree {requested} exceeds the supported cap {cap}")]
    DegreeTooLarge { requested: usize, cap: usize },

    #[error("evaluation point {0} lies outside the reference element [-1, 1]")]
    PointOutOfRange(f64),

    #[error("derivative order {order} not supported for {context}")]
    InvalidDerivativeOrder { order: usize, context: &'static str },

    #[error("node index {index} out of range (mesh has nodes 0..={max})")]
    NodeOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is singular to working precision at row {row}")]
    SingularMatrix { row: usize },

    #[error(
        "Newton iteration did not converge: {iterations} iterations, residual {residual:e} \
         (tolerance {tolerance:e})"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error(
        "Newton iteration diverged: residual {residual:e} grew past \
         {factor:e} x initial ({initial:e})"
    )]
    Divergence {
        residual: f64,
        initial: f64,
        factor: f64,
    },

    #[error("analytic function is missing derivative of order {0}")]
    MissingDerivative(usize),

    #[error("time step {step} (t = {time}) failed: {source}")]
    StepFailed {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },
}
