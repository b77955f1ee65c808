use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{interior_branch_factor, FockError};
use crate::numerics::complex_gauss_jacobi;
use crate::numerics::quadrature::legendre_rule;
use crate::specfun::{bessel_j, conical_legendre_p, gamma, gegenbauer_c, gegenbauer_c_complex, pochhammer};
use crate::waves::{direction, hyperbolic_partial_wave, norm, real_harmonic, sphere_area, BoundaryData, SpectralParams};

/// Quadrature controls for the inverse radial transform.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseSpec {
    /// Half-width of the band around |xi| = 1 handled by the finite part.
    pub window: f64,
    /// The band is graded as y = window e^{-u}, u in [0, depth].
    pub depth: f64,
    /// Truncation of the outer |xi| integral.
    pub cutoff: f64,
    pub node_count: usize,
}

impl Default for InverseSpec {
    fn default() -> Self {
        Self {
            window: 0.5,
            depth: 36.0,
            cutoff: 400.0,
            node_count: 16,
        }
    }
}

impl InverseSpec {
    fn validate(&self) -> Result<(), FockError> {
        if !(self.window > 0.0 && self.window < 1.0) {
            return Err(FockError::InvalidArgument("window must lie in (0, 1)".into()));
        }
        if !(self.depth > 0.0) || !(self.cutoff > 1.0 + self.window) || self.node_count < 2 {
            return Err(FockError::InvalidArgument("depth, cutoff or node count out of range".into()));
        }
        Ok(())
    }
}

/// Which side of the unit sphere, with y = | |xi| - 1 |.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Outside,
    Inside,
}

/// A radial Fourier-side profile with its two leading terms at the sphere:
/// H(1 +- y) ~ sum_j c_j y^{a_j}, a_j = -1 -+ i lambda, with the interior
/// coefficients `interior` times the exterior ones.
trait Profile: Sync {
    fn at(&self, xi: f64) -> Result<Complex64, FockError>;
    fn near(&self, side: Side, y: f64) -> Result<Complex64, FockError>;
    fn leading(&self) -> [(Complex64, Complex64); 2];
    fn interior(&self) -> Complex64;
}

/// Hyperbolic partial wave in terms of q = (1-rho)/(1+rho), accurate as
/// rho -> 1.
fn hyperbolic_from_q(lambda: f64, d: usize, l: usize, q: f64) -> Result<Complex64, FockError> {
    let df = d as f64;
    let x = (1.0 + q * q) / (2.0 * q);
    let geom = ((1.0 - q) * (1.0 + q) / (2.0 * q)).powf(1.0 - df / 2.0);
    let mu = df / 2.0 - 1.0 + l as f64;
    let p = conical_legendre_p(lambda, mu, x)?;
    let a = Complex64::new((df - 1.0) / 2.0, -lambda);
    Ok((2.0 * PI).powf(df / 2.0) * pochhammer(a, l) * geom * p)
}

/// Exterior profile H(xi) = hyp(1/xi) / ((xi^2-1)/2)^{(d+1)/2}, continued
/// inside by H(xi) = -(e^{-pi|lambda|}/xi^{d+1}) H(1/xi).
struct HyperbolicProfile {
    lambda: f64,
    d: usize,
    l: usize,
}

impl HyperbolicProfile {
    /// Exterior value at xi = 1 + y.
    fn exterior(&self, y: f64) -> Result<Complex64, FockError> {
        let rho = 1.0 / (1.0 + y);
        let hyp = if rho < 0.5 {
            hyperbolic_partial_wave(self.lambda, self.d, self.l, rho)?
        } else {
            hyperbolic_from_q(self.lambda, self.d, self.l, y / (2.0 + y))?
        };
        Ok(hyp * (y * (2.0 + y) / 2.0).powf(-(self.d as f64 + 1.0) / 2.0))
    }

    fn reflect(&self, xi: f64, outer: Complex64) -> Complex64 {
        -outer * (-PI * self.lambda.abs()).exp() / xi.powi(self.d as i32 + 1)
    }
}

impl Profile for HyperbolicProfile {
    fn at(&self, xi: f64) -> Result<Complex64, FockError> {
        if xi > 1.0 {
            self.exterior(xi - 1.0)
        } else if xi == 0.0 {
            // H(xi) ~ xi^l as xi -> 0
            if self.l > 0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let small = 1e-8;
            self.at(small)
        } else {
            let y_out = (1.0 - xi) / xi;
            Ok(self.reflect(xi, self.exterior(y_out)?))
        }
    }

    fn near(&self, side: Side, y: f64) -> Result<Complex64, FockError> {
        match side {
            Side::Outside => self.exterior(y),
            Side::Inside => {
                let xi = 1.0 - y;
                Ok(self.reflect(xi, self.exterior(y / xi)?))
            }
        }
    }

    fn leading(&self) -> [(Complex64, Complex64); 2] {
        let df = self.d as f64;
        let lam = self.lambda;
        let mu = df / 2.0 - 1.0 + self.l as f64;
        let pref = (2.0 * PI).powf(df / 2.0) * pochhammer(Complex64::new((df - 1.0) / 2.0, -lam), self.l) / PI.sqrt();
        let c = |s: f64| {
            let g = gamma(Complex64::new(0.0, s * lam)) / gamma(Complex64::new(0.5 + mu, s * lam));
            let two = (Complex64::new(-0.5, s * lam) * std::f64::consts::LN_2).exp();
            pref * g * two
        };
        [(Complex64::new(-1.0, -lam), c(1.0)), (Complex64::new(-1.0, lam), c(-1.0))]
    }

    fn interior(&self) -> Complex64 {
        Complex64::new(-(-PI * self.lambda.abs()).exp(), 0.0)
    }
}

/// Fourier-side partial wave from the Schwinger kernel:
/// 2^{(d+1)/2} (xi^2 - 1 - sgn(lambda) 0 i)^{-1-i lambda} K_l(xi), with the
/// Funk-Hecke integral
/// K_l(xi) = |S^{d-2}| int_{-1}^1 (xi^2+1-2 xi t)^p C_l(t)/C_l(1) (1-t^2)^{(d-3)/2} dt,
/// p = -(d-1)/2 + i lambda.
struct SchwingerProfile {
    lambda: f64,
    d: usize,
    l: usize,
    k0: Complex64,
}

impl SchwingerProfile {
    fn new(lambda: f64, d: usize, l: usize) -> Result<Self, FockError> {
        let mut s = Self {
            lambda,
            d,
            l,
            k0: Complex64::new(0.0, 0.0),
        };
        s.k0 = s.regular_part()?;
        Ok(s)
    }

    fn exponent(&self) -> Complex64 {
        Complex64::new(-(self.d as f64 - 1.0) / 2.0, self.lambda)
    }

    fn zonal(&self, t: f64) -> f64 {
        let alpha = (self.d as f64 - 2.0) / 2.0;
        gegenbauer_c(self.l, alpha, t) / gegenbauer_c(self.l, alpha, 1.0)
    }

    /// C_l(t)/C_l(1) at complex t.
    fn zonal_complex(&self, t: Complex64) -> Complex64 {
        let alpha = (self.d as f64 - 2.0) / 2.0;
        gegenbauer_c_complex(self.l, alpha, t) / gegenbauer_c(self.l, alpha, 1.0)
    }

    /// K_l at |xi| = 1 by analytic continuation in the endpoint exponent.
    fn regular_part(&self) -> Result<Complex64, FockError> {
        let half = (self.d as f64 - 3.0) / 2.0;
        let p = self.exponent();
        let rule = complex_gauss_jacobi(40, Complex64::new(-1.0, self.lambda), Complex64::new(half, 0.0))?;
        let sum = rule.apply(|t| self.zonal_complex(t));
        Ok(sum * sphere_area(self.d - 1) * (p * std::f64::consts::LN_2).exp())
    }

    /// Coefficient of |y|^{2 i lambda} in K_l(1 + y).
    fn singular_part(&self) -> Complex64 {
        let b = (self.d as f64 - 1.0) / 2.0;
        let lam = self.lambda;
        sphere_area(self.d - 1) / 2.0 * gamma(Complex64::new(b, 0.0)) * gamma(Complex64::new(0.0, -lam))
            / gamma(Complex64::new(b, -lam))
    }

    /// K_l(xi) with y = xi - 1 passed separately for accuracy.
    fn funk_hecke(&self, xi: f64, y: f64) -> Complex64 {
        let rule = legendre_rule(16);
        let p = self.exponent();
        let half = (self.d as f64 - 3.0) / 2.0;
        let dm2 = self.d as i32 - 2;
        // t in [0, 1] with 1 - t = s^2: base y^2 + 2 xi s^2, graded at |y|
        let near = |s: f64| {
            let base = y * y + 2.0 * xi * s * s;
            (p * base.ln()).exp() * (2.0 * s.powi(dm2) * (2.0 - s * s).powf(half) * self.zonal(1.0 - s * s))
        };
        let mut acc = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        let mut b = y.abs().clamp(1e-300, 0.5);
        loop {
            acc += rule.integrate(a, b, near);
            if b >= 1.0 {
                break;
            }
            a = b;
            b = (2.0 * b).min(1.0);
        }
        // t in [-1, 0] with 1 + t = s^2
        let far = |s: f64| {
            let base = (xi + 1.0) * (xi + 1.0) - 2.0 * xi * s * s;
            (p * base.ln()).exp() * (2.0 * s.powi(dm2) * (2.0 - s * s).powf(half) * self.zonal(s * s - 1.0))
        };
        acc += rule.integrate(0.0, 0.5, far) + rule.integrate(0.5, 1.0, far);
        acc * sphere_area(self.d - 1)
    }

    fn value(&self, xi: f64, y: f64) -> Complex64 {
        // |xi^2 - 1| = |y| |xi + 1|
        let m = y.abs() * (xi + 1.0);
        let w = Complex64::new(-1.0, -self.lambda);
        let mut v = (w * m.ln()).exp() * self.funk_hecke(xi, y) * 2f64.powf((self.d as f64 + 1.0) / 2.0);
        if xi < 1.0 {
            v *= interior_branch_factor(self.lambda);
        }
        v
    }
}

impl Profile for SchwingerProfile {
    fn at(&self, xi: f64) -> Result<Complex64, FockError> {
        Ok(self.value(xi, xi - 1.0))
    }

    fn near(&self, side: Side, y: f64) -> Result<Complex64, FockError> {
        Ok(match side {
            Side::Outside => self.value(1.0 + y, y),
            Side::Inside => self.value(1.0 - y, -y),
        })
    }

    fn leading(&self) -> [(Complex64, Complex64); 2] {
        let lam = self.lambda;
        let pref = 2f64.powf((self.d as f64 + 1.0) / 2.0) * (Complex64::new(-1.0, -lam) * std::f64::consts::LN_2).exp();
        [
            (Complex64::new(-1.0, -lam), pref * self.k0),
            (Complex64::new(-1.0, lam), pref * self.singular_part()),
        ]
    }

    fn interior(&self) -> Complex64 {
        interior_branch_factor(self.lambda)
    }
}

/// int_0^inf H(xi) xi^{d/2} J_nu(xi t) d xi with the non-integrable
/// |xi| = 1 singularity taken as a finite part.
fn finite_part_transform<P: Profile>(profile: &P, d: usize, nu: f64, t: f64, spec: &InverseSpec) -> Result<Complex64, FockError> {
    let half_d = d as f64 / 2.0;
    let w = |xi: f64| xi.powf(half_d) * bessel_j(nu, xi * t);
    let w1 = w(1.0);
    let rule = legendre_rule(spec.node_count);
    let delta = spec.window;
    let lead = profile.leading();

    // Band around the sphere, one side at a time.
    let band = |side: Side| -> Result<Complex64, FockError> {
        let scale = if side == Side::Outside { Complex64::new(1.0, 0.0) } else { profile.interior() };
        let panels = spec.depth.ceil() as usize;
        let h = spec.depth / panels as f64;
        let nodes: Vec<(f64, f64)> = (0..panels)
            .flat_map(|j| {
                let a = j as f64 * h;
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(move |(&x, &wt)| (a + 0.5 * h * (1.0 + x), 0.5 * h * wt))
            })
            .collect();
        let terms = nodes
            .par_iter()
            .map(|&(u, wt)| {
                let y = delta * (-u).exp();
                let xi = if side == Side::Outside { 1.0 + y } else { 1.0 - y };
                let mut v = profile.near(side, y)? * w(xi);
                for &(a, c) in &lead {
                    v -= scale * c * w1 * (a * y.ln()).exp();
                }
                Ok(v * y * wt)
            })
            .collect::<Result<Vec<_>, FockError>>()?;
        let mut acc: Complex64 = terms.into_iter().sum();
        for &(a, c) in &lead {
            acc += scale * c * w1 * ((a + 1.0) * delta.ln()).exp() / (a + 1.0);
        }
        Ok(acc)
    };
    let band_total = band(Side::Outside)? + band(Side::Inside)?;

    // Plain panels away from the sphere.
    let width = (0.5f64).min(1.0 / t.max(1e-300));
    let plain = |a: f64, b: f64| -> Result<Complex64, FockError> {
        let panels = ((b - a) / width).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        let parts = (0..panels)
            .into_par_iter()
            .map(|j| {
                let lo = a + j as f64 * h;
                let mut acc = Complex64::new(0.0, 0.0);
                for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
                    let xi = lo + 0.5 * h * (1.0 + x);
                    acc += profile.at(xi)? * w(xi) * (0.5 * h * wt);
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>, FockError>>()?;
        Ok(parts.into_iter().sum())
    };
    Ok(band_total + plain(0.0, 1.0 - delta)? + plain(1.0 + delta, spec.cutoff)?)
}

fn radial_inverse<P: Profile>(params: &SpectralParams, l: usize, r: f64, profile: &P, spec: &InverseSpec) -> Result<Complex64, FockError> {
    spec.validate()?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(FockError::OutsideDomain(format!("r must be positive, got {r}")));
    }
    let d = params.d as f64;
    let t = params.wavenumber().abs() * r;
    let nu = d / 2.0 - 1.0 + l as f64;
    let integral = finite_part_transform(profile, params.d, nu, t, spec)?;
    let phase = Complex64::new(0.0, -params.lambda.signum()).powu(l as u32);
    let pref = params.lambda.abs().powf(d / 2.0) * params.hbar.powi(params.d as i32);
    Ok(integral * t.powf(1.0 - d / 2.0) / (phase * pref))
}

/// V^{-1} applied to the hyperbolic partial wave of degree l, at radius r:
/// the data are carried to |xi| > 1 by inversion and the inverse
/// multiplier, extended inside by the branch rule, and inverse
/// Hankel-transformed with the sphere singularity as a finite part.
pub fn fock_map_inverse_partial_wave(params: &SpectralParams, l: usize, r: f64, spec: &InverseSpec) -> Result<Complex64, FockError> {
    let profile = HyperbolicProfile {
        lambda: params.lambda,
        d: params.d,
        l,
    };
    radial_inverse(params, l, r, &profile, spec)
}

/// Inverse transform of the Schwinger kernel integrated against the
/// degree-l harmonic; equals the Coulomb partial wave at r.
pub fn schwinger_partial_wave(params: &SpectralParams, l: usize, r: f64, spec: &InverseSpec) -> Result<Complex64, FockError> {
    let profile = SchwingerProfile::new(params.lambda, params.d, l)?;
    radial_inverse(params, l, r, &profile, spec)
}

/// Coulomb Poisson wave of f at x through the Schwinger formula, degree by
/// degree.
pub fn schwinger_poisson(params: &SpectralParams, f: &BoundaryData, x: &[f64], spec: &InverseSpec) -> Result<Complex64, FockError> {
    if f.dim() != params.d || x.len() != params.d {
        return Err(FockError::InvalidArgument("boundary data and point must have dimension params.d".into()));
    }
    let r = norm(x);
    let xhat = direction(x);
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, row) in f.coefficients().iter().enumerate() {
        let angular: Complex64 = row.iter().enumerate().map(|(m, &c)| c * real_harmonic(l, m, &xhat)).sum();
        if angular == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += schwinger_partial_wave(params, l, r, spec)? * angular;
    }
    Ok(acc)
}
