//! Interior-penalty discontinuous Galerkin discretization of the one
//! dimensional Rosenau equation
//!
//! ```text
//! u_t + eps * u_xxxxt = f(u)_x,   (x, t) in (a, b) x (0, T],
//! u = u_x = 0 at x = a, b,        f(u) = sum_i c_i u^(p_i + 1) / (p_i + 1),
//! ```
//!
//! with clamped boundary conditions enforced weakly through boundary jump
//! penalties, and backward-Euler/Newton time stepping.
//!
//! The crate is organized along the pipeline:
//!
//! * [`mesh`], [`quadrature`], [`basis`]: 1D meshes, Gauss-Legendre rules,
//!   and the Legendre modal basis with derivatives up to order three.
//! * [`space`]: the broken polynomial space and coefficient vectors.
//! * [`operator`]: mass matrix and the penalized bilinear form
//!   `B = eps*A + J_sigma0 + J_sigma1` in block-tridiagonal storage.
//! * [`flux`]: the polynomial flux, its discrete right-hand side
//!   `(f(u_h)_x, chi)` and the corresponding Jacobian.
//! * [`solver`]: banded LU with partial pivoting and Newton iteration.
//! * [`projection`]: elliptic (auxiliary) and L2 projections of initial data.
//! * [`timestepper`]: the fully discrete backward Euler scheme.
//! * [`norms`]: L2/energy/Linf norms, EOC tables, weak-residual checks.

pub mod analytic;
pub mod banded;
pub mod basis;
pub mod error;
pub mod flux;
pub mod mesh;
pub mod norms;
pub mod operator;
pub mod projection;
pub mod quadrature;
pub mod solver;
pub mod space;
pub mod timestepper;

pub use analytic::{AnalyticFunction, SpaceTimeFunction};
pub use banded::BandedMatrix;
pub use basis::{element_trace, eval_basis, BasisEval, ElementTrace, Side};
pub use error::{Error, Result};
pub use flux::FluxSpec;
pub use mesh::{build_uniform_mesh, Mesh};
pub use operator::{apply_b, assemble_b_form, assemble_mass, bilinear_value, PenaltyParams};
pub use quadrature::{gauss_rule, QuadratureRule};
pub use solver::{newton_solve, BandedLu, NewtonOptions, SolveReport};
pub use space::{DgSpace, DgVector};
pub use timestepper::{SimulationState, TimeGrid};
