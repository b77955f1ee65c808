//! The scattering matrix of the hyperbolic Laplacian (equal to the Coulomb
//! one): its Schwartz kernel on the sphere, its eigenvalues on spherical
//! harmonics, and their agreement through the Funk-Hecke formula.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{complex_gauss_jacobi, gauss_jacobi, integrate_damped_oscillatory, NumericsError, QuadratureSpec};
use crate::specfun::{gegenbauer_c, gegenbauer_c_complex, log_gamma};
use crate::waves::{sphere_area, SphereDirection};

pub use crate::specfun::{harish_chandra_c, plancherel_density};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatteringError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("kernel evaluated at coincident directions")]
    Coincident,
    #[error("lambda = 0 is a zero of the Plancherel density")]
    SpectralZero,
    #[error("quadrature did not converge: estimate {estimate:e} exceeds {limit:e}")]
    NonConvergence { estimate: f64, limit: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn check(lambda: f64, d: usize) -> Result<(), ScatteringError> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(ScatteringError::InvalidArgument(format!("lambda must be nonzero, got {lambda}")));
    }
    if d < 2 {
        return Err(ScatteringError::InvalidArgument(format!("dimension must be >= 2, got {d}")));
    }
    Ok(())
}

/// Eigenvalue of S(lambda) on degree-l harmonics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringEigenvalue {
    pub l: usize,
    pub lambda: f64,
    pub d: usize,
    pub value: Complex64,
}

impl ScatteringEigenvalue {
    pub fn new(lambda: f64, d: usize, l: usize) -> Result<Self, ScatteringError> {
        Ok(Self {
            l,
            lambda,
            d,
            value: s_eigenvalue(lambda, d, l)?,
        })
    }

    /// | |value| - 1 |.
    pub fn unitarity_defect(&self) -> f64 {
        (self.value.norm() - 1.0).abs()
    }
}

/// log of 2^{-2 lambda i} pi^{-(d-1)/2} Gamma((d-1)/2 - lambda i)/Gamma(lambda i).
fn log_kernel_constant(lambda: f64, d: usize) -> Complex64 {
    let b = (d as f64 - 1.0) / 2.0;
    Complex64::new(-b * PI.ln(), -2.0 * lambda * std::f64::consts::LN_2) + log_gamma(Complex64::new(b, -lambda))
        - log_gamma(Complex64::new(0.0, lambda))
}

/// Schwartz kernel
/// 2^{-2 lambda i} pi^{-(d-1)/2} Gamma((d-1)/2 - lambda i)/Gamma(lambda i) |theta - theta'|^{-(d-1-2 lambda i)}.
pub fn s_kernel(lambda: f64, d: usize, theta: &SphereDirection, theta_p: &SphereDirection) -> Result<Complex64, ScatteringError> {
    check(lambda, d)?;
    if theta.dim() != d || theta_p.dim() != d {
        return Err(ScatteringError::InvalidArgument(format!("directions must lie on S^{}", d - 1)));
    }
    let dist2: f64 = theta
        .as_slice()
        .iter()
        .zip(theta_p.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if dist2 == 0.0 {
        return Err(ScatteringError::Coincident);
    }
    let p = Complex64::new(-(d as f64 - 1.0) / 2.0, lambda);
    Ok((log_kernel_constant(lambda, d) + p * dist2.ln()).exp())
}

/// Gamma(l + (d-1)/2 - lambda i)/Gamma(l + (d-1)/2 + lambda i).
pub fn s_eigenvalue(lambda: f64, d: usize, l: usize) -> Result<Complex64, ScatteringError> {
    check(lambda, d)?;
    let a = l as f64 + (d as f64 - 1.0) / 2.0;
    // The ratio of conjugates is exp(-2 i arg Gamma).
    let arg = log_gamma(Complex64::new(a, lambda)).im;
    Ok(Complex64::new(0.0, -2.0 * arg).exp())
}

/// Quadrature for the Funk-Hecke integral of the kernel, whose zonal
/// profile carries (1-t)^{-1+lambda i} at t = 1.
#[derive(Debug, Clone, PartialEq)]
pub enum FunkHeckeRule {
    /// Gauss-Jacobi rule with the complex endpoint exponent in the weight
    /// (value by analytic continuation in the exponent).
    ComplexJacobi { nodes: usize },
    /// t in [-1, 0] by a real Jacobi rule; t in [0, 1] through 1 - t = e^{-s},
    /// an Abel-summed oscillatory s-integral. The damping ladder starts at
    /// |lambda|/4 when `spec.damping_ladder` is left at its default.
    Damped { nodes: usize, spec: QuadratureSpec },
}

impl Default for FunkHeckeRule {
    fn default() -> Self {
        FunkHeckeRule::ComplexJacobi { nodes: 40 }
    }
}

/// S(lambda) on degree-l harmonics from its kernel:
/// |S^{d-2}|/C_l(1) int_{-1}^1 k(t) C_l(t) (1-t^2)^{(d-3)/2} dt, with
/// k(t) the kernel at theta.theta' = t and C_l the Gegenbauer polynomial
/// of index (d-2)/2.
pub fn funk_hecke_eigenvalue(lambda: f64, d: usize, l: usize, rule: &FunkHeckeRule) -> Result<Complex64, ScatteringError> {
    check(lambda, d)?;
    let alpha = (d as f64 - 2.0) / 2.0;
    let half = (d as f64 - 3.0) / 2.0;
    let c1 = gegenbauer_c(l, alpha, 1.0);
    let p = Complex64::new(-(d as f64 - 1.0) / 2.0, lambda);
    // k(t) = K (2-2t)^p; (2-2t)^p (1-t^2)^{(d-3)/2} = 2^p (1-t)^{-1+i lambda} (1+t)^{(d-3)/2}
    let pref = (log_kernel_constant(lambda, d) + p * std::f64::consts::LN_2).exp() * sphere_area(d - 1) / c1;
    let integral = match rule {
        FunkHeckeRule::ComplexJacobi { nodes } => {
            let r = complex_gauss_jacobi(*nodes, Complex64::new(-1.0, lambda), Complex64::new(half, 0.0))?;
            r.apply(|t| gegenbauer_c_complex(l, alpha, t))
        }
        FunkHeckeRule::Damped { nodes, spec } => {
            // t = (x - 1)/2 on [-1, 0]: (1+t)^{half} dt = 2^{-half-1} (1+x)^{half} dx
            let r = gauss_jacobi(*nodes, 0.0, half)?;
            let lower: Complex64 = r.apply(|x| {
                let t = (x - 1.0) / 2.0;
                (Complex64::new(-1.0, lambda) * (1.0 - t).ln()).exp() * gegenbauer_c(l, alpha, t)
            }) * 2f64.powf(-half - 1.0);
            // 1 - t = e^{-s} on [0, 1]: (1-t)^{-1+i lambda} dt = e^{-i lambda s} ds
            let g = |s: f64| {
                let t = 1.0 - (-s).exp();
                Complex64::new(0.0, -lambda * s).exp() * (1.0 + t).powf(half) * gegenbauer_c(l, alpha, t)
            };
            let mut quad = spec.clone();
            if quad.damping_ladder == QuadratureSpec::default().damping_ladder {
                let len = quad.extrapolation_order + 1;
                quad = quad.with_geometric_ladder(lambda.abs() / 4.0, 2.0, len);
            }
            let tol = quad.tolerance;
            quad.tolerance = 1e12;
            let eps_min = quad.damping_ladder.iter().copied().fold(f64::INFINITY, f64::min);
            let upper = integrate_damped_oscillatory(g, 40.0 / eps_min, &quad)?;
            if upper.error_estimate > tol * upper.value.norm().max(1.0) {
                return Err(ScatteringError::NonConvergence {
                    estimate: upper.error_estimate,
                    limit: tol,
                });
            }
            lower + upper.value
        }
    };
    Ok(pref * integral)
}

/// [`plancherel_density`] that reports lambda = 0 instead of returning 0.
pub fn plancherel_density_checked(lambda: f64, d: usize) -> Result<f64, ScatteringError> {
    if lambda == 0.0 {
        return Err(ScatteringError::SpectralZero);
    }
    check(lambda, d)?;
    Ok(plancherel_density(lambda, d))
}
