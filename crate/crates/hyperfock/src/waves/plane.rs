use std::f64::consts::PI;

use num_complex::Complex64;

use super::{dot, norm, SpectralParams, SphereDirection, WaveKind, WavesError};
use crate::specfun::{olver_m_checked, RegimePolicy};

fn check_dims(x: &[f64], d: usize, theta0: &SphereDirection) -> Result<(), WavesError> {
    if x.len() != d || theta0.dim() != d {
        return Err(WavesError::InvalidArgument(format!(
            "point and direction must have dimension {d}"
        )));
    }
    Ok(())
}

fn perturbed_plane_wave(params: &SpectralParams, x: &[f64], theta0: &SphereDirection, sign: f64) -> Result<Complex64, WavesError> {
    check_dims(x, params.d, theta0)?;
    let k = params.wavenumber();
    let along = dot(x, theta0.as_slice());
    let t = (norm(x) - along).max(0.0);
    let m = olver_m_checked(
        Complex64::new(0.0, sign * params.lambda),
        Complex64::new(params.half_dim(), 0.0),
        Complex64::new(0.0, k * t),
        &RegimePolicy::default(),
    )?;
    Ok(params.normalization() * Complex64::new(0.0, k * along).exp() * m)
}

/// Coulomb perturbed plane wave
/// psi(x; theta0) = c e^{i k x.theta0} **M**(i lambda; (d-1)/2; i k (|x| - x.theta0)),
/// k = 1/(hbar^2 lambda).
pub fn coulomb_plane_wave(params: &SpectralParams, x: &[f64], theta0: &SphereDirection) -> Result<Complex64, WavesError> {
    perturbed_plane_wave(params, x, theta0, 1.0)
}

/// Repulsive analogue c e^{-pi|lambda|} e^{i k x.theta0} **M**(-i lambda; (d-1)/2; i k (|x| - x.theta0)).
pub fn repulsive_plane_wave(params: &SpectralParams, x: &[f64], theta0: &SphereDirection) -> Result<Complex64, WavesError> {
    Ok((-PI * params.lambda.abs()).exp() * perturbed_plane_wave(params, x, theta0, -1.0)?)
}

/// Hyperbolic plane wave e_lambda(u; theta0) = ((1-|u|^2)/|u-theta0|^2)^{(d-1)/2 - i lambda}
/// on the unit ball.
pub fn hyperbolic_plane_wave(lambda: f64, u: &[f64], theta0: &SphereDirection) -> Result<Complex64, WavesError> {
    let d = u.len();
    check_dims(u, d, theta0)?;
    let r2 = dot(u, u);
    if r2 >= 1.0 {
        return Err(WavesError::OutsideDomain(format!("|u| = {} is not inside the unit ball", r2.sqrt())));
    }
    let dist2: f64 = u.iter().zip(theta0.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum();
    let base = (1.0 - r2) / dist2;
    let w = Complex64::new((d as f64 - 1.0) / 2.0, -lambda);
    Ok((w * base.ln()).exp())
}

/// Plane wave of the given kind (hbar is ignored for the hyperbolic kind).
pub fn plane_wave(kind: WaveKind, params: &SpectralParams, x: &[f64], theta0: &SphereDirection) -> Result<Complex64, WavesError> {
    match kind {
        WaveKind::Coulomb => coulomb_plane_wave(params, x, theta0),
        WaveKind::Repulsive => repulsive_plane_wave(params, x, theta0),
        WaveKind::Hyperbolic => hyperbolic_plane_wave(params.lambda, x, theta0),
    }
}
