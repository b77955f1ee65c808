use std::f64::consts::PI;

use num_complex::Complex64;

use super::FockError;
use crate::numerics::complex_gauss_jacobi;
use crate::numerics::quadrature::legendre_rule;
use crate::specfun::{conical_legendre_p, log_gamma};

fn check(d: usize, xi_norm: f64) -> Result<(), FockError> {
    if d < 2 {
        return Err(FockError::InvalidArgument(format!("dimension must be >= 2, got {d}")));
    }
    if !(xi_norm > 1.0) || !xi_norm.is_finite() {
        return Err(FockError::OutsideDomain(format!("the I-integral needs |xi| > 1, got {xi_norm}")));
    }
    Ok(())
}

/// Order A = (d-1)/2 + l of the endpoint weights.
fn order(d: usize, l: usize) -> f64 {
    (d as f64 - 1.0) / 2.0 + l as f64
}

/// I(xi) = int_0^1 t^{A-1-i lambda} (1-t)^{A-1+i lambda} (1-2t)
///           / (|xi|^2 - (1-2t)^2)^{(d+1)/2+l} dt,  A = (d-1)/2 + l.
///
/// In s = 1 - 2t the weight is (1-s)^{A-1-i lambda}(1+s)^{A-1+i lambda},
/// integrated by a complex-exponent Gauss-Jacobi rule so that the
/// logarithmic oscillation at both endpoints sits in the weight.
pub fn appendix_i_integral(lambda: f64, l: usize, d: usize, xi_norm: f64) -> Result<Complex64, FockError> {
    check(d, xi_norm)?;
    if lambda == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let a = order(d, l);
    let p = (d as f64 + 1.0) / 2.0 + l as f64;
    let x2 = xi_norm * xi_norm;
    // Nearest singularity at s = xi: ellipse parameter xi + sqrt(xi^2 - 1).
    let rate = (xi_norm + (x2 - 1.0).sqrt()).ln();
    let n = ((19.0 / rate).ceil() as usize).clamp(24, 160);
    let rule = complex_gauss_jacobi(n, Complex64::new(a - 1.0, -lambda), Complex64::new(a - 1.0, lambda))?;
    let sum = rule.apply(|s| s * (-p * (x2 - s * s).ln()).exp());
    Ok(sum * 2f64.powf(1.0 - 2.0 * a))
}

/// Prefactor i lambda / (2^{A-1} (|xi|^2-1)^{(d+1)/2+l} A) of the cosh form.
fn cosh_prefactor(lambda: f64, l: usize, d: usize, xi_norm: f64) -> Complex64 {
    let a = order(d, l);
    let p = (d as f64 + 1.0) / 2.0 + l as f64;
    let x2 = xi_norm * xi_norm;
    Complex64::new(0.0, lambda) / (2f64.powf(a - 1.0) * (x2 - 1.0).powf(p) * a)
}

/// The same integral through
///
/// i lambda / (2^{A-1} (|xi|^2-1)^{(d+1)/2+l} A)
///   * int_0^inf cos(lambda u) / ((|xi|^2+1)/(|xi|^2-1) + cosh u)^A du,
///
/// with the u-integral by composite Gauss-Legendre on the real axis.
pub fn appendix_i_integral_cosh(lambda: f64, l: usize, d: usize, xi_norm: f64) -> Result<Complex64, FockError> {
    check(d, xi_norm)?;
    let a = order(d, l);
    let x2 = xi_norm * xi_norm;
    let x = (x2 + 1.0) / (x2 - 1.0);
    // (x + cosh u)^{-A} < e^{-A(u - ln 2)}; stop below 1e-18 relative.
    let u_max = 42.0 / a + 2.0;
    let width = (0.25f64).min(1.0 / lambda.abs().max(1e-300));
    let panels = (u_max / width).ceil() as usize;
    let h = u_max / panels as f64;
    let rule = legendre_rule(20);
    let mut acc = 0.0;
    for j in 0..panels {
        acc += rule.integrate(j as f64 * h, (j + 1) as f64 * h, |u| {
            (lambda * u).cos() * (-a * (x + u.cosh()).ln()).exp()
        });
    }
    Ok(cosh_prefactor(lambda, l, d, xi_norm) * acc)
}

/// The cosh form with its u-integral replaced by the conical Legendre
/// function: int_0^inf cos(lambda u)/(X + cosh u)^{mu+1/2} du
/// = P^{-mu}_{-1/2+i lambda}(X) sqrt(pi) |Gamma(mu+1/2+i lambda)|^2
///   / (sqrt(2) Gamma(mu+1/2) (X^2-1)^{mu/2}),  mu = A - 1/2.
pub fn appendix_i_integral_conical(lambda: f64, l: usize, d: usize, xi_norm: f64) -> Result<Complex64, FockError> {
    check(d, xi_norm)?;
    let a = order(d, l);
    let mu = a - 0.5;
    let x2 = xi_norm * xi_norm;
    let x = (x2 + 1.0) / (x2 - 1.0);
    let p = conical_legendre_p(lambda, mu, x)?;
    let log_ratio = 2.0 * log_gamma(Complex64::new(a, lambda)).re - log_gamma(Complex64::new(a, 0.0)).re
        - 0.5 * mu * ((x - 1.0) * (x + 1.0)).ln();
    let integral = p * (PI / 2.0).sqrt() * log_ratio.exp();
    Ok(cosh_prefactor(lambda, l, d, xi_norm) * integral)
}
