//! Classical side: the Coulomb Hamiltonians, the Moser map onto the unit
//! cotangent bundle of two-sheeted hyperbolic space, the Kepler flow with
//! collision reflection, conserved quantities, hyperbolic geodesic flow
//! and the time change relating the two flows.

mod flow;
mod geodesic;
mod moser;

pub use flow::{
    conserved_quantities, hamiltonian, kepler_flow, kepler_flow_at, kepler_period, momentum_circle_fit, CircleFit, ConservedSet,
    KeplerOrbit, KeplerSign,
};
pub use geodesic::{
    flow_correspondence_check, geodesic_flow, hyperbolic_distance, kepler_third_law_check, Correspondence,
};
pub use moser::{
    moser_map, moser_map_inverse, symplectic_defect, symplectic_pullback_check, HyperbolicCotangentPoint, Sheet,
};

pub use crate::numerics::{OdeSpec, PhasePoint, Trajectory};

use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KeplerError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("outside the domain: {0}")]
    OutsideDomain(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}
