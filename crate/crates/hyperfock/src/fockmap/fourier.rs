use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::FockError;
use crate::numerics::{richardson_extrapolate, Extrapolated};
use crate::specfun::{olver_m_checked, RegimePolicy};
use crate::waves::{SpectralParams, SphereDirection};

/// The factor maps of V = I o M o R o D o F acting pointwise on the Fourier
/// side.
#[derive(Debug, Clone, Copy, Default)]
pub struct OperatorFactors;

impl OperatorFactors {
    /// Inversion in the unit sphere, u -> u/|u|^2.
    pub fn invert(u: &[f64]) -> Result<Vec<f64>, FockError> {
        let r2: f64 = u.iter().map(|c| c * c).sum();
        if r2 == 0.0 {
            return Err(FockError::OutsideDomain("inversion of the origin".into()));
        }
        Ok(u.iter().map(|c| c / r2).collect())
    }

    /// Multiplier |(|xi|^2 - 1)/2|^{(d+1)/2}.
    pub fn multiplier(d: usize, xi_norm: f64) -> f64 {
        ((xi_norm * xi_norm - 1.0) / 2.0).abs().powf((d as f64 + 1.0) / 2.0)
    }

    /// Prefactor |hbar lambda|^{-d/2} of the L^2-normalized dilation.
    pub fn dilation_prefactor(params: &SpectralParams) -> f64 {
        (params.hbar * params.lambda).abs().powf(-(params.d as f64) / 2.0)
    }

    /// Prefactor (2 pi hbar)^{-d/2} of the semiclassical Fourier transform.
    pub fn fourier_prefactor(params: &SpectralParams) -> f64 {
        (2.0 * PI * params.hbar).powf(-(params.d as f64) / 2.0)
    }

    /// V applied to a Fourier-side function g at u in the punctured ball:
    /// M(|xi|) g(xi) at xi = u/|u|^2.
    pub fn apply_v<G>(d: usize, u: &[f64], g: G) -> Result<Complex64, FockError>
    where
        G: FnOnce(&[f64]) -> Result<Complex64, FockError>,
    {
        let r = norm(u);
        if !(r > 0.0 && r < 1.0) {
            return Err(FockError::OutsideDomain(format!("V needs 0 < |u| < 1, got {r}")));
        }
        let xi = Self::invert(u)?;
        Ok(g(&xi)? * Self::multiplier(d, 1.0 / r))
    }

    /// V^- applied to a Fourier-side function g at u in the ball: M(|u|) g(u).
    pub fn apply_v_minus<G>(d: usize, u: &[f64], g: G) -> Result<Complex64, FockError>
    where
        G: FnOnce(&[f64]) -> Result<Complex64, FockError>,
    {
        let r = norm(u);
        if !(r < 1.0) {
            return Err(FockError::OutsideDomain(format!("V^- needs |u| < 1, got {r}")));
        }
        Ok(g(u)? * Self::multiplier(d, r))
    }
}

/// Side of the unit sphere a Fourier-side point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Exterior,
    Interior,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSideValue {
    pub xi: Vec<f64>,
    pub value: Complex64,
    pub branch: Branch,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_dims(params: &SpectralParams, xi: &[f64], theta0: &SphereDirection) -> Result<(), FockError> {
    if xi.len() != params.d || theta0.dim() != params.d {
        return Err(FockError::InvalidArgument(format!("points must have dimension {}", params.d)));
    }
    Ok(())
}

/// log(|xi|^2 - 1 - sgn(lambda) 0 i): argument 0 outside the sphere and
/// -sgn(lambda) pi inside.
fn log_sphere_symbol(r2: f64, lambda: f64) -> Complex64 {
    let m = r2 - 1.0;
    let arg = if m > 0.0 { 0.0 } else { -lambda.signum() * PI };
    Complex64::new(m.abs().ln(), arg)
}

/// (|xi|^2 - 1 - sgn(lambda) 0 i)^{-(1 + lambda i)} for |xi| < 1 divided
/// by |1 - |xi|^2|^{-(1 + lambda i)}; equals -e^{-pi |lambda|}.
pub fn interior_branch_factor(lambda: f64) -> Complex64 {
    let w = Complex64::new(1.0, lambda);
    (-w * Complex64::new(0.0, -lambda.signum() * PI)).exp()
}

/// Dilated semiclassical Fourier transform of the Coulomb plane wave away
/// from theta0 and the unit sphere:
///
/// 2^{(d+1)/2} / ((|xi|^2 - 1 - sgn(lambda) 0 i)^{1 + lambda i} |xi - theta0|^{d-1-2 lambda i}).
pub fn fourier_closed_form(
    params: &SpectralParams,
    xi: &[f64],
    theta0: &SphereDirection,
) -> Result<FourierSideValue, FockError> {
    check_dims(params, xi, theta0)?;
    let r2: f64 = xi.iter().map(|c| c * c).sum();
    let dt2 = dist2(xi, theta0.as_slice());
    if dt2 == 0.0 {
        return Err(FockError::OutsideDomain("xi coincides with theta0".into()));
    }
    if r2 == 1.0 {
        return Err(FockError::OutsideDomain("xi lies on the unit sphere".into()));
    }
    let d = params.d as f64;
    let lam = params.lambda;
    let log = -Complex64::new(1.0, lam) * log_sphere_symbol(r2, lam)
        - Complex64::new((d - 1.0) / 2.0, -lam) * dt2.ln()
        + (d + 1.0) / 2.0 * std::f64::consts::LN_2;
    Ok(FourierSideValue {
        xi: xi.to_vec(),
        value: log.exp(),
        branch: if r2 > 1.0 { Branch::Exterior } else { Branch::Interior },
    })
}

/// Finite-eps member of the regularizing family
///
/// 2^{(d+1)/2} (eps + lambda i)/|lambda|
///   * (eps^2 (1 + (b - eps - lambda i) Q / ((eps + lambda i) D)) - sgn(lambda) i)
///   / (Q^{1 + eps + lambda i} D^{b - eps - lambda i}),
///
/// Q = |xi|^2 - 1 + eps^4 - 2 sgn(lambda) eps^2 i, D = |xi - theta0|^2 + eps^4,
/// b = (d-1)/2. Its eps -> 0 limit is the dilated Fourier transform of the
/// plane wave as a distribution.
pub fn fourier_regularized(
    params: &SpectralParams,
    xi: &[f64],
    theta0: &SphereDirection,
    eps: f64,
) -> Result<Complex64, FockError> {
    check_dims(params, xi, theta0)?;
    if !(eps > 0.0) {
        return Err(FockError::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let lam = params.lambda;
    let sgn = lam.signum();
    let b = params.half_dim();
    let e2 = eps * eps;
    let r2: f64 = xi.iter().map(|c| c * c).sum();
    let q = Complex64::new(r2 - 1.0 + e2 * e2, -2.0 * sgn * e2);
    let dd = dist2(xi, theta0.as_slice()) + e2 * e2;
    let el = Complex64::new(eps, lam);
    let wq = Complex64::new(1.0 + eps, lam);
    let wd = Complex64::new(b - eps, -lam);
    let numer = (1.0 + wd * q / (el * dd)) * e2 - Complex64::new(0.0, sgn);
    let denom = (wq * q.ln() + wd * dd.ln()).exp();
    let pref = 2f64.powf((params.d as f64 + 1.0) / 2.0) / lam.abs();
    Ok(el * pref * numer / denom)
}

/// Both sides of the inversion symmetry at an interior point and their
/// relative deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
}

/// value(xi) against -(e^{-pi|lambda|}/|xi|^{d+1}) value(xi/|xi|^2) for
/// 0 < |xi| < 1, both from [`fourier_closed_form`].
pub fn inversion_symmetry_check(
    params: &SpectralParams,
    xi: &[f64],
    theta0: &SphereDirection,
) -> Result<InversionCheck, FockError> {
    let r = norm(xi);
    if !(r > 0.0 && r < 1.0) {
        return Err(FockError::OutsideDomain(format!("inversion check needs 0 < |xi| < 1, got {r}")));
    }
    let lhs = fourier_closed_form(params, xi, theta0)?.value;
    let outer = OperatorFactors::invert(xi)?;
    let ext = fourier_closed_form(params, &outer, theta0)?.value;
    let rhs = -ext * ((-PI * params.lambda.abs()).exp() / r.powi(params.d as i32 + 1));
    Ok(InversionCheck {
        lhs,
        rhs,
        deviation: (lhs - rhs).norm() / lhs.norm(),
    })
}

/// Direct numerical dilated Fourier transform of the d = 2 Coulomb plane
/// wave at xi, damped by e^{-eps |x|} and extrapolated to eps = 0.
///
/// In parabolic coordinates x.theta0 = (s^2 - t^2)/2, x.theta0' = s t the
/// wave depends on t only and the s integral is Gaussian, leaving one
/// damped oscillatory integral in t per rung of `ladder`.
pub fn fourier_numeric_2d(
    params: &SpectralParams,
    xi: &[f64],
    theta0: &SphereDirection,
    ladder: Option<&[f64]>,
    order: usize,
) -> Result<Extrapolated, FockError> {
    if params.d != 2 {
        return Err(FockError::InvalidArgument("the direct transform is implemented for d = 2".into()));
    }
    check_dims(params, xi, theta0)?;
    let k = params.wavenumber();
    let th = theta0.as_slice();
    // frequencies in units of x
    let q1 = k * (xi[0] * th[0] + xi[1] * th[1]);
    let q2 = k * (-xi[0] * th[1] + xi[1] * th[0]);
    let kq = k - q1;
    if kq == 0.0 {
        return Err(FockError::OutsideDomain("xi on the degenerate line of the parabolic reduction".into()));
    }
    // Radius of analyticity in eps of the damped integral.
    let omega1 = (kq * kq - q2 * q2) / (2.0 * kq);
    let omega2 = k - omega1;
    let stretch = 1.0 + q2 * q2 / (kq * kq);
    let radius = kq.abs().min(2.0 * omega1.abs().min(omega2.abs()) / stretch);
    if !(radius > 0.0) {
        return Err(FockError::OutsideDomain("xi on the singular set of the transform".into()));
    }
    let default_ladder: Vec<f64> = (0..6).map(|j| radius / 4.0 / 2f64.powi(j)).collect();
    let ladder = ladder.unwrap_or(&default_ladder);
    if ladder.len() <= order || ladder.iter().any(|&e| !(e > 0.0)) {
        return Err(FockError::InvalidArgument("ladder needs more than `order` positive rungs".into()));
    }
    let eps_min = ladder.iter().cloned().fold(f64::INFINITY, f64::min);

    let fmax = k.abs() + omega1.abs() + omega2.abs() + kq.abs();
    let width = (2.0 / fmax).min(1.0);
    let s_max = 90.0 / eps_min;
    let panels = (s_max / width).ceil() as usize;
    let rule = crate::numerics::quadrature::legendre_rule(16);
    let lam = params.lambda;
    let policy = RegimePolicy::default();
    let m_at = |s: f64| {
        olver_m_checked(
            Complex64::new(0.0, lam),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, k * s),
            &policy,
        )
    };
    // Nodes in s = t^2: t in [0, 1] directly, then panels in s.
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t = 0.5 * (1.0 + x);
        // weight in dt; stored as (s, dt-weight)
        nodes.push((t * t, 0.5 * w));
    }
    for p in 0..panels {
        let a = 1.0 + p as f64 * width;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = a + 0.5 * width * (1.0 + x);
            nodes.push((s, 0.5 * width * w / (2.0 * s.sqrt())));
        }
    }
    let mvals = nodes
        .par_iter()
        .map(|&(s, _)| m_at(s))
        .collect::<Result<Vec<_>, _>>()?;

    let pref = OperatorFactors::dilation_prefactor(params) * OperatorFactors::fourier_prefactor(params) * params.normalization();
    let samples: Vec<(f64, Complex64)> = ladder
        .iter()
        .map(|&eps| {
            let a = Complex64::new(eps, -kq);
            let abar = Complex64::new(eps, kq);
            let rate = abar / 2.0 + q2 * q2 / (2.0 * a);
            let c0 = 1.0 / a;
            let c1 = 1.0 - q2 * q2 / (a * a);
            let mut acc = Complex64::new(0.0, 0.0);
            for (&(s, w), &m) in nodes.iter().zip(&mvals) {
                let damp = (-rate * s).exp();
                if damp.norm() < 1e-300 {
                    continue;
                }
                acc += m * damp * (c0 + c1 * s) * w;
            }
            let gauss = (2.0 * PI / a).sqrt();
            (eps, acc * gauss * pref)
        })
        .collect();
    Ok(richardson_extrapolate(&samples, order, false)?)
}
