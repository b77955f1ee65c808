//! Generalized Fock transform between Coulomb and hyperbolic generalized
//! eigenfunctions on the continuous spectrum, the classical Moser map
//! between Kepler orbits and hyperbolic geodesics, and the scattering
//! matrix the two problems share.
//!
//! Modules build on each other in order: [`numerics`] and [`specfun`]
//! supply quadrature, ODE integration and special functions; [`waves`]
//! evaluates plane and partial waves; [`fockmap`] implements the unitary
//! map and its inverse; [`scattering`] and [`kepler`] cover the spectral
//! and classical sides.

pub mod numerics;
pub mod specfun;
pub mod waves;
pub mod fockmap;
pub mod scattering;
pub mod kepler;

pub use fockmap::{FockError, HankelSpec, InverseSpec};
pub use kepler::{HyperbolicCotangentPoint, KeplerError, KeplerSign};
pub use numerics::{EventFlag, NumericsError, OdeSpec, PhasePoint, QuadratureSpec, Trajectory};
pub use scattering::{ScatteringEigenvalue, ScatteringError};
pub use specfun::{RegimePolicy, SpecFunError};
pub use waves::{BoundaryData, SpectralParams, SphereDirection, SphereRule, WaveField, WaveKind, WavesError};
