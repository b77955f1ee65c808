use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::gamma::log_gamma;
use super::SpecFunError;
use crate::numerics::quadrature::legendre_rule;

/// Imaginary shift of the integration path for lambda != 0.
const CONTOUR_SHIFT: f64 = PI - 1.0;
const PANEL_WIDTH: f64 = 0.5;

/// Conical Legendre function P^{-mu}_{-1/2 + i lambda}(x) for x > 1, mu >= 0,
/// from
///
/// (x^2-1)^{mu/2} sqrt(2) Gamma(mu+1/2) / (sqrt(pi) |Gamma(mu+1/2+i lambda)|^2)
///   * int_0^inf cos(lambda t) / (x + cosh t)^{mu+1/2} dt.
///
/// For lambda != 0 the integral equals e^{-|lambda| g} Re int_0^inf
/// e^{i|lambda|t} (x + cosh(t + i g))^{-(mu+1/2)} dt with g = pi - 1 (the
/// vertical piece of the shifted path is purely imaginary). This avoids
/// the e^{-pi|lambda|} cancellation of the real-axis integral.
pub fn conical_legendre_p(lambda: f64, mu: f64, x: f64) -> Result<f64, SpecFunError> {
    if !(x > 1.0) {
        return Err(SpecFunError::Domain(format!("conical P needs x > 1, got {x}")));
    }
    if !(mu >= 0.0) {
        return Err(SpecFunError::Domain(format!("conical P needs mu >= 0, got {mu}")));
    }
    let lam = lambda.abs();
    let s = mu + 0.5;
    let shift = if lam == 0.0 { 0.0 } else { CONTOUR_SHIFT };
    let log_pref = 0.5 * mu * ((x - 1.0) * (x + 1.0)).ln() + 0.5 * LN_2 + log_gamma(Complex64::new(s, 0.0)).re
        - 0.5 * PI.ln()
        - 2.0 * log_gamma(Complex64::new(s, lam)).re
        - lam * shift;

    let t_max = 40f64.max((40.0 + x.ln()) / s);
    let panels = (t_max / PANEL_WIDTH).ceil() as usize;
    let h = t_max / panels as f64;
    let rule = legendre_rule(16);
    let (cg, sg) = (shift.cos(), shift.sin());
    let mut acc = 0.0;
    for j in 0..panels {
        acc += rule.integrate(j as f64 * h, (j + 1) as f64 * h, |t| {
            let base = Complex64::new(x + t.cosh() * cg, t.sinh() * sg);
            (Complex64::new(0.0, lam * t) - s * base.ln()).exp().re
        });
    }
    Ok(log_pref.exp() * acc)
}

/// Gegenbauer polynomial C^alpha_l(t). For alpha = 0 the normalized limit
/// (2/l) T_l(t) is returned (and 1 for l = 0).
pub fn gegenbauer_c(l: usize, alpha: f64, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    if alpha == 0.0 {
        let mut prev = 1.0;
        let mut cur = t;
        for _ in 1..l {
            let next = 2.0 * t * cur - prev;
            prev = cur;
            cur = next;
        }
        return 2.0 / l as f64 * cur;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * alpha * t;
    for n in 2..=l {
        let nf = n as f64;
        let next = (2.0 * t * (nf + alpha - 1.0) * cur - (nf + 2.0 * alpha - 2.0) * prev) / nf;
        prev = cur;
        cur = next;
    }
    cur
}

/// [`gegenbauer_c`] at complex argument, same conventions.
pub fn gegenbauer_c_complex(l: usize, alpha: f64, t: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if l == 0 {
        return one;
    }
    if alpha == 0.0 {
        let (mut prev, mut cur) = (one, t);
        for _ in 1..l {
            let next = t * cur * 2.0 - prev;
            prev = cur;
            cur = next;
        }
        return cur * (2.0 / l as f64);
    }
    let (mut prev, mut cur) = (one, t * (2.0 * alpha));
    for n in 2..=l {
        let nf = n as f64;
        let next = (t * cur * (2.0 * (nf + alpha - 1.0)) - prev * (nf + 2.0 * alpha - 2.0)) / nf;
        prev = cur;
        cur = next;
    }
    cur
}
