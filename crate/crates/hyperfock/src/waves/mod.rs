//! Generalized eigenfunctions: Coulomb perturbed plane waves (attractive and
//! repulsive), hyperbolic plane waves, their partial waves, Poisson
//! synthesis from boundary data and finite-difference eigen-residuals.

mod harmonics;
mod partial;
mod plane;
mod residual;
mod synth;

pub use harmonics::{harmonic_count, real_harmonic, sphere_area, BoundaryData, SphereDirection, SphereRule};
pub use partial::{coulomb_partial_wave, hyperbolic_partial_wave, partial_wave, repulsive_partial_wave};
pub use plane::{coulomb_plane_wave, hyperbolic_plane_wave, plane_wave, repulsive_plane_wave};
pub use residual::{
    eigen_residual_coulomb, eigen_residual_hyperbolic, eigen_residual_repulsive, hyperbolic_laplacian_residual,
};
pub use synth::{poisson_quadrature, poisson_synthesize, WaveField};

pub(crate) use harmonics::{direction, dot, norm};

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::numerics::NumericsError;
use crate::specfun::SpecFunError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WavesError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point outside the domain: {0}")]
    OutsideDomain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Dimension, semiclassical parameter and spectral parameter (d, hbar, lambda).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub d: usize,
    pub hbar: f64,
    pub lambda: f64,
}

impl SpectralParams {
    pub fn new(d: usize, hbar: f64, lambda: f64) -> Result<Self, WavesError> {
        if d < 2 {
            return Err(WavesError::InvalidArgument(format!("dimension must be >= 2, got {d}")));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(WavesError::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(WavesError::InvalidArgument(format!("lambda must be nonzero, got {lambda}")));
        }
        Ok(Self { d, hbar, lambda })
    }

    /// E = 1 / (2 hbar^2 lambda^2).
    pub fn energy(&self) -> f64 {
        1.0 / (2.0 * self.hbar * self.hbar * self.lambda * self.lambda)
    }

    /// Signed wavenumber k = 1 / (hbar^2 lambda).
    pub fn wavenumber(&self) -> f64 {
        1.0 / (self.hbar * self.hbar * self.lambda)
    }

    /// (d-1)/2.
    pub fn half_dim(&self) -> f64 {
        (self.d as f64 - 1.0) / 2.0
    }

    /// Plane-wave constant c = sqrt(2 pi) |lambda|^{-1-d/2} hbar^{-d}, the
    /// value for which the dilated semiclassical Fourier transform of the
    /// plane wave has the prefactor 2^{(d+1)/2} exactly.
    pub fn normalization(&self) -> f64 {
        let d = self.d as f64;
        (2.0 * PI).sqrt() * self.lambda.abs().powf(-1.0 - d / 2.0) * self.hbar.powf(-d)
    }

    /// |lambda|^{d/2-1} hbar^{d/2} sqrt(2 pi); agrees with
    /// [`normalization`](Self::normalization) at hbar = |lambda| = 1 only.
    pub fn printed_normalization(&self) -> f64 {
        let d = self.d as f64;
        (2.0 * PI).sqrt() * self.lambda.abs().powf(d / 2.0 - 1.0) * self.hbar.powf(d / 2.0)
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..*self }
    }
}

/// Which family of generalized eigenfunctions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveKind {
    Coulomb,
    Repulsive,
    Hyperbolic,
}

impl fmt::Display for WaveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WaveKind::Coulomb => "coulomb",
            WaveKind::Repulsive => "repulsive",
            WaveKind::Hyperbolic => "hyperbolic",
        })
    }
}
