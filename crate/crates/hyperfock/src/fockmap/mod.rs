//! The map from Coulomb generalized eigenfunctions to hyperbolic ones:
//! Fourier-side closed forms of the plane waves, the factor operators
//! I, M, R, D and F, the partial-wave Hankel pipelines for the attractive
//! and repulsive maps, and the inverse map through the finite-part
//! extension across the unit sphere.

mod i_integral;
mod fourier;
mod hankel;
mod inverse;

pub use i_integral::{appendix_i_integral, appendix_i_integral_cosh, appendix_i_integral_conical};
pub use fourier::{
    fourier_closed_form, fourier_numeric_2d, fourier_regularized, interior_branch_factor, inversion_symmetry_check,
    Branch, FourierSideValue, InversionCheck, OperatorFactors,
};
pub use inverse::{fock_map_inverse_partial_wave, schwinger_partial_wave, schwinger_poisson, InverseSpec};
pub use hankel::{
    fock_map_apply, fock_map_partial_wave, fourier_partial_wave, repulsive_map_partial_wave, HankelSpec,
};

use thiserror::Error;

use crate::numerics::NumericsError;
use crate::specfun::SpecFunError;
use crate::waves::WavesError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point outside the domain: {0}")]
    OutsideDomain(String),
    #[error("quadrature did not converge: estimate {estimate:e} exceeds {limit:e}")]
    NonConvergence { estimate: f64, limit: f64 },
    #[error(transparent)]
    Waves(#[from] WavesError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}
