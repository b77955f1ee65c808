use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::dd::DD;
use super::gamma::log_gamma;
use crate::numerics::quadrature::legendre_rule;

/// Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0.
///
/// Ascending series (double-double) for x <= max(12, 2 nu); Hankel's
/// asymptotic expansion beyond when it reaches 1e-13, otherwise Schlafli's
/// integral.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0, "bessel_j needs nu >= 0 and x >= 0");
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= 12f64.max(2.0 * nu) {
        return series(nu, x);
    }
    hankel_asymptotic(nu, x).unwrap_or_else(|| schlafli(nu, x))
}

fn series(nu: f64, x: f64) -> f64 {
    let half = x / 2.0;
    let lead = (nu * half.ln() - log_gamma(Complex64::new(nu + 1.0, 0.0)).re).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = DD::new(half) * DD::new(half);
    let mut term = DD::new(1.0);
    let mut sum = DD::new(1.0);
    let mut k = 0.0;
    loop {
        k += 1.0;
        term = -(term * q) / (DD::new(k) * DD::new(nu + k));
        sum = sum + term;
        if term.abs() <= 1e-34 * sum.abs().max(1e-300) && k > half {
            break;
        }
        if k > 2000.0 {
            break;
        }
    }
    lead * sum.to_f64()
}

fn hankel_asymptotic(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        if a.abs() < 1e-13 {
            let w = x - nu * FRAC_PI_2 - FRAC_PI_4;
            return Some((2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin()));
        }
        if a.abs() > prev {
            return None;
        }
        prev = a.abs();
        // a_k(nu)/x^k with the alternating signs of P and Q folded in
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        let odd = (2 * k + 1) as f64;
        a *= (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
    }
    None
}

fn schlafli(nu: f64, x: f64) -> f64 {
    let rule = legendre_rule(16);
    // (1/pi) int_0^pi cos(nu tau - x sin tau) d tau
    let panels = ((x + nu) * 0.5).ceil().max(4.0) as usize;
    let h = PI / panels as f64;
    let mut first = 0.0;
    for j in 0..panels {
        first += rule.integrate(j as f64 * h, (j + 1) as f64 * h, |t| (nu * t - x * t.sin()).cos());
    }
    first /= PI;
    let s = (nu * PI).sin();
    if s.abs() < 1e-300 {
        return first;
    }
    // int_0^inf e^{-x sinh t - nu t} dt with s = x sinh t
    let mut second = 0.0;
    for j in 0..40 {
        second += rule.integrate(j as f64, (j + 1) as f64, |s| {
            let root = (x * x + s * s).sqrt();
            (-s).exp() * ((s + root) / x).powf(-nu) / root
        });
    }
    first - s / PI * second
}
