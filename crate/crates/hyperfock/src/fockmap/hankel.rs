use std::cell::RefCell;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{FockError, OperatorFactors};
use crate::numerics::{integrate_damped_oscillatory, QuadratureSpec};
use crate::specfun::bessel_j;
use crate::waves::{direction, norm, partial_wave, real_harmonic, BoundaryData, SpectralParams, WaveKind, WavesError};

/// Quadrature controls for the radial Hankel transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSpec {
    /// Gauss-Legendre nodes per panel.
    pub node_count: usize,
    /// Number of damping rungs; the first is a quarter of the distance to
    /// the nearest resonance of the transform. Up to two rungs are added
    /// when the error estimate misses the tolerance.
    pub ladder_len: usize,
    pub ladder_ratio: f64,
    pub extrapolation_order: usize,
    /// Truncation radius times the smallest damping parameter.
    pub reach: f64,
    /// Relative tolerance on the extrapolation error estimate.
    pub tolerance: f64,
}

impl Default for HankelSpec {
    fn default() -> Self {
        Self {
            node_count: 16,
            ladder_len: 6,
            ladder_ratio: 2.0,
            extrapolation_order: 5,
            reach: 37.0,
            tolerance: 1e-6,
        }
    }
}

/// Radial profile of D o F applied to psi_l Y_l^m, as a function of |xi|:
///
/// |lambda|^{d/2} hbar^d (-i sgn lambda)^l |xi|^{1-d/2}
///   * int_0^inf psi_l(t/|k|) t^{d/2} J_{d/2-1+l}(|xi| t) dt,
///
/// where psi_l is the Coulomb or repulsive partial wave, k = 1/(hbar^2 lambda)
/// and the t-integral is an Abel limit.
pub fn fourier_partial_wave(
    kind: WaveKind,
    params: &SpectralParams,
    l: usize,
    xi_norm: f64,
    spec: &HankelSpec,
) -> Result<Complex64, FockError> {
    if kind == WaveKind::Hyperbolic {
        return Err(FockError::InvalidArgument("the Hankel pipeline takes Coulomb or repulsive waves".into()));
    }
    if !(xi_norm > 0.0) || xi_norm == 1.0 || !xi_norm.is_finite() {
        return Err(FockError::OutsideDomain(format!("|xi| must be positive and off the sphere, got {xi_norm}")));
    }
    let d = params.d as f64;
    let nu = d / 2.0 - 1.0 + l as f64;
    let k = params.wavenumber().abs();
    // The integrand oscillates at t-frequencies +-|xi| +- 1.
    let gap = (xi_norm - 1.0).abs();
    let mut ladder_len = spec.ladder_len;
    let out = loop {
        let quad = QuadratureSpec {
            node_count: spec.node_count,
            extrapolation_order: spec.extrapolation_order,
            panel_width: (3.0 / (xi_norm + 1.0)).min(1.0),
            tolerance: 1e12,
            ..QuadratureSpec::default()
        }
        .with_geometric_ladder(gap / 4.0, spec.ladder_ratio, ladder_len);
        let eps_min = quad.damping_ladder.last().copied().unwrap_or(gap / 4.0);
        let failure: RefCell<Option<WavesError>> = RefCell::new(None);
        let integrand = |t: f64| match partial_wave(kind, params, l, t / k) {
            Ok(psi) => psi * t.powf(d / 2.0) * bessel_j(nu, xi_norm * t),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        };
        let out = integrate_damped_oscillatory(integrand, spec.reach / eps_min, &quad)?;
        if let Some(e) = failure.into_inner() {
            return Err(e.into());
        }
        if out.error_estimate <= spec.tolerance * out.value.norm() {
            break out;
        }
        // A longer ladder reaches smaller damping; retry twice before giving up.
        if ladder_len >= spec.ladder_len + 2 {
            return Err(FockError::NonConvergence {
                estimate: out.error_estimate / out.value.norm(),
                limit: spec.tolerance,
            });
        }
        ladder_len += 1;
    };
    let phase = Complex64::new(0.0, -params.lambda.signum()).powu(l as u32);
    let pref = params.lambda.abs().powf(d / 2.0) * params.hbar.powi(params.d as i32) * xi_norm.powf(1.0 - d / 2.0);
    Ok(out.value * phase * pref)
}

fn check_ball(rho: f64) -> Result<(), FockError> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(FockError::OutsideDomain(format!("rho must lie in (0, 1), got {rho}")));
    }
    Ok(())
}

/// V applied to the Coulomb partial wave of degree l, at radius rho of the
/// ball: the multiplier at |xi| = 1/rho times the Hankel transform there.
pub fn fock_map_partial_wave(params: &SpectralParams, l: usize, rho: f64, spec: &HankelSpec) -> Result<Complex64, FockError> {
    check_ball(rho)?;
    let xi = 1.0 / rho;
    let h = fourier_partial_wave(WaveKind::Coulomb, params, l, xi, spec)?;
    Ok(h * OperatorFactors::multiplier(params.d, xi))
}

/// V^- applied to the repulsive partial wave of degree l, at radius rho:
/// no inversion, the transform is read inside the unit sphere.
pub fn repulsive_map_partial_wave(params: &SpectralParams, l: usize, rho: f64, spec: &HankelSpec) -> Result<Complex64, FockError> {
    check_ball(rho)?;
    let h = fourier_partial_wave(WaveKind::Repulsive, params, l, rho, spec)?;
    Ok(h * OperatorFactors::multiplier(params.d, rho))
}

/// V applied to the Coulomb Poisson wave of `f` at u: the sum over degrees
/// of f_{lm} times the mapped partial wave and Y_l^m(u/|u|).
pub fn fock_map_apply(params: &SpectralParams, f: &BoundaryData, u: &[f64], spec: &HankelSpec) -> Result<Complex64, FockError> {
    if f.dim() != params.d || u.len() != params.d {
        return Err(FockError::InvalidArgument("boundary data and point must have dimension params.d".into()));
    }
    let rho = norm(u);
    check_ball(rho)?;
    let uhat = direction(u);
    let terms = f
        .coefficients()
        .par_iter()
        .enumerate()
        .map(|(l, row)| {
            let angular: Complex64 = row.iter().enumerate().map(|(m, &c)| c * real_harmonic(l, m, &uhat)).sum();
            if angular == Complex64::new(0.0, 0.0) {
                return Ok(angular);
            }
            Ok(fock_map_partial_wave(params, l, rho, spec)? * angular)
        })
        .collect::<Result<Vec<_>, FockError>>()?;
    Ok(terms.into_iter().sum())
}
