//! Quadrature, extrapolation, finite differences and ODE integration.
//!
//! Everything here is generic plumbing for the higher modules: Gauss rules
//! (Legendre, Jacobi with real or complex exponents), damped integration of
//! conditionally convergent radial integrals with Richardson extrapolation
//! in the damping parameter, an embedded Runge-Kutta 5(4) integrator with
//! event location, and central-difference Jacobians.

mod extrapolate;
mod fd;
mod ode;
pub(crate) mod quadrature;

pub use extrapolate::{integrate_damped_oscillatory, richardson_extrapolate, Extrapolated, QuadratureSpec};
pub use fd::finite_difference_jacobian;
pub use ode::{
    ode_integrate, ode_integrate_at, Event, EventFlag, EventOutcome, OdeSpec, OdeState, PhasePoint,
    Trajectory,
};
pub use quadrature::{
    complex_gauss_jacobi, gauss_jacobi, gauss_legendre, ComplexRule, GaussRule,
};

use thiserror::Error;

/// Failures of the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("extrapolation did not converge: value {value_re}+{value_im}i, spread {spread:e} exceeds {limit:e}")]
    NonConvergence {
        value_re: f64,
        value_im: f64,
        spread: f64,
        limit: f64,
    },
    #[error("degenerate damping ladder (repeated nodes)")]
    DegenerateLadder,
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("event located at t = {0} but no reflection callback supplied")]
    MissingReflection(f64),
    #[error("map undefined at a stencil point")]
    SingularStencil,
}
