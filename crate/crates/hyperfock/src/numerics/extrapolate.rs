use num_complex::Complex64;

use super::quadrature::legendre_rule;
use super::NumericsError;

/// Parameters for damped oscillatory quadrature and endpoint-weighted rules.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per panel (or total nodes for a Jacobi rule).
    pub node_count: usize,
    pub jacobi_alpha: f64,
    pub jacobi_beta: f64,
    /// Strictly decreasing damping parameters.
    pub damping_ladder: Vec<f64>,
    /// Degree of the extrapolating polynomial in the damping parameter.
    pub extrapolation_order: usize,
    /// Panel length for composite rules on the radial half-line.
    pub panel_width: f64,
    /// Tolerance used to decide non-convergence of the extrapolation.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            node_count: 16,
            jacobi_alpha: 0.0,
            jacobi_beta: 0.0,
            damping_ladder: vec![0.2, 0.1, 0.05, 0.025, 0.0125],
            extrapolation_order: 3,
            panel_width: 1.0,
            tolerance: 1e-6,
        }
    }
}

impl QuadratureSpec {
    /// Geometric ladder eps0, eps0/ratio, ... with `len` entries.
    pub fn with_geometric_ladder(mut self, eps0: f64, ratio: f64, len: usize) -> Self {
        self.damping_ladder = (0..len).map(|k| eps0 / ratio.powi(k as i32)).collect();
        self
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        let bad = |msg: &str| Err(NumericsError::InvalidArgument(msg.to_string()));
        if self.node_count < 2 {
            return bad("node_count must be at least 2");
        }
        if self.damping_ladder.is_empty() {
            return bad("damping ladder is empty");
        }
        if self.damping_ladder.iter().any(|&e| !(e > 0.0)) {
            return bad("damping parameters must be positive");
        }
        if self.damping_ladder.windows(2).any(|w| w[1] >= w[0]) {
            return bad("damping ladder must be strictly decreasing");
        }
        if self.extrapolation_order >= self.damping_ladder.len() {
            return bad("extrapolation order must be below the ladder length");
        }
        if !(self.jacobi_alpha > -1.0) || !(self.jacobi_beta > -1.0) {
            return bad("Jacobi exponents must exceed -1");
        }
        if !(self.panel_width > 0.0) || !(self.tolerance > 0.0) {
            return bad("panel width and tolerance must be positive");
        }
        Ok(())
    }
}

/// Extrapolated limit together with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Polynomial extrapolation to eps = 0 through the last `order + 1` samples
/// (smallest eps). With `even` the polynomial is in eps^2.
///
/// The error estimate is the difference between the degree-`order` and
/// degree-`order - 1` extrapolants.
pub fn richardson_extrapolate(
    samples: &[(f64, Complex64)],
    order: usize,
    even: bool,
) -> Result<Extrapolated, NumericsError> {
    if samples.is_empty() || order >= samples.len() {
        return Err(NumericsError::InvalidArgument(
            "extrapolation order must be below the sample count".into(),
        ));
    }
    for (i, a) in samples.iter().enumerate() {
        if !(a.0 > 0.0) {
            return Err(NumericsError::InvalidArgument("damping parameters must be positive".into()));
        }
        if samples[..i].iter().any(|b| b.0 == a.0) {
            return Err(NumericsError::DegenerateLadder);
        }
    }
    let used = &samples[samples.len() - order - 1..];
    let xs: Vec<f64> = used
        .iter()
        .map(|&(e, _)| if even { e * e } else { e })
        .collect();
    let ys: Vec<Complex64> = used.iter().map(|&(_, v)| v).collect();
    let value = neville_at_zero(&xs, &ys);
    let error_estimate = if order == 0 {
        if samples.len() >= 2 {
            (samples[samples.len() - 1].1 - samples[samples.len() - 2].1).norm()
        } else {
            0.0
        }
    } else {
        (value - neville_at_zero(&xs[1..], &ys[1..])).norm()
    };
    Ok(Extrapolated { value, error_estimate })
}

fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = p[i + 1] + (p[i] - p[i + 1]) * (xj / (xj - xi));
        }
    }
    p[0]
}

/// Extrapolated eps -> 0 limit of int_0^{r_max} f(r) e^{-eps r} dr.
///
/// `f` is sampled once on a composite Gauss-Legendre grid (panels of
/// `spec.panel_width`, `spec.node_count` nodes each); every rung of the
/// damping ladder reuses the same samples.
pub fn integrate_damped_oscillatory<F>(
    f: F,
    r_max: f64,
    spec: &QuadratureSpec,
) -> Result<Extrapolated, NumericsError>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(r_max > 0.0) {
        return Err(NumericsError::InvalidArgument("r_max must be positive".into()));
    }
    let rule = legendre_rule(spec.node_count);
    let panels = (r_max / spec.panel_width).ceil().max(1.0) as usize;
    let width = r_max / panels as f64;
    let mut sums = vec![Complex64::new(0.0, 0.0); spec.damping_ladder.len()];
    for p in 0..panels {
        let a = p as f64 * width;
        let half = 0.5 * width;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = a + half * (1.0 + t);
            let v = f(r) * (w * half);
            for (s, &eps) in sums.iter_mut().zip(&spec.damping_ladder) {
                *s += v * (-eps * r).exp();
            }
        }
    }
    let samples: Vec<(f64, Complex64)> = spec.damping_ladder.iter().copied().zip(sums).collect();
    let out = richardson_extrapolate(&samples, spec.extrapolation_order, false)?;
    let limit = 10.0 * spec.tolerance * out.value.norm().max(1.0);
    if out.error_estimate > limit {
        return Err(NumericsError::NonConvergence {
            value_re: out.value.re,
            value_im: out.value.im,
            spread: out.error_estimate,
            limit,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant_samples_extrapolate_exactly() {
        let s: Vec<_> = [0.4, 0.2, 0.1].iter().map(|&e| (e, c(2.5))).collect();
        let out = richardson_extrapolate(&s, 2, false).unwrap();
        assert_eq!(out.value, c(2.5));
    }

    #[test]
    fn linear_model_is_exact() {
        let s: Vec<_> = [0.4, 0.2].iter().map(|&e| (e, c(3.0 + 2.0 * e))).collect();
        let out = richardson_extrapolate(&s, 1, false).unwrap();
        assert!((out.value - c(3.0)).norm() < 1e-14);
    }

    #[test]
    fn sinc_limit() {
        let s: Vec<_> = [0.1, 0.05, 0.025].iter().map(|&e: &f64| (e, c(e.sin() / e))).collect();
        // In eps the quadratic leaves the eps^4 term (~2e-7); sinc is even,
        // so the eps^2 variable removes it.
        let out = richardson_extrapolate(&s, 2, false).unwrap();
        assert!((out.value - c(1.0)).norm() < 1e-6);
        let even = richardson_extrapolate(&s, 2, true).unwrap();
        assert!((even.value - c(1.0)).norm() < 1e-8);
    }

    #[test]
    fn repeated_nodes_rejected() {
        let s = vec![(0.1, c(1.0)), (0.1, c(1.0))];
        assert_eq!(richardson_extrapolate(&s, 1, false), Err(NumericsError::DegenerateLadder));
    }

    #[test]
    fn decaying_integrand_is_unaffected() {
        // The damped integral is analytic in eps with radius ~1, so the
        // extrapolation residual is O(prod eps_k); a small ladder makes it
        // negligible.
        let spec = QuadratureSpec::default().with_geometric_ladder(0.02, 2.0, 5);
        let out = integrate_damped_oscillatory(|r| c((-r).exp()), 30.0, &spec).unwrap();
        assert!((out.value - c(1.0 - (-30f64).exp())).norm() < 1e-9, "{out:?}");
        // The default ladder cannot certify 1e-6 here and says so.
        let coarse = integrate_damped_oscillatory(|r| c((-r).exp()), 30.0, &QuadratureSpec::default());
        assert!(matches!(coarse, Err(NumericsError::NonConvergence { .. })));
    }

    #[test]
    fn abel_limit_of_plane_wave() {
        // int_0^inf e^{ir - eps r} dr = 1/(eps - i) -> i. The ladder stops at
        // eps = 0.08 so that the truncation at r = 400 stays below e^{-32}.
        let spec = QuadratureSpec {
            damping_ladder: vec![0.32, 0.24, 0.16, 0.12, 0.08],
            extrapolation_order: 4,
            tolerance: 1e-3,
            ..QuadratureSpec::default()
        };
        let out = integrate_damped_oscillatory(|r| Complex64::new(0.0, r).exp(), 400.0, &spec).unwrap();
        assert!((out.value - Complex64::new(0.0, 1.0)).norm() < 1e-3, "{:?}", out);
    }

    #[test]
    fn damped_cosine_over_lorentzian() {
        // Absolutely convergent: extrapolation must reproduce the undamped
        // dense-panel value.
        let f = |r: f64| c(r.cos() / (1.0 + r * r));
        let spec = QuadratureSpec::default().with_geometric_ladder(0.02, 2.0, 5);
        let out = integrate_damped_oscillatory(f, 50.0, &spec).unwrap();
        let dense = QuadratureSpec {
            node_count: 32,
            panel_width: 0.25,
            damping_ladder: vec![1e-12],
            extrapolation_order: 0,
            ..QuadratureSpec::default()
        };
        let reference = integrate_damped_oscillatory(f, 50.0, &dense).unwrap();
        assert!((out.value - reference.value).norm() < 1e-8, "{out:?} vs {reference:?}");
    }

    #[test]
    fn linear_in_integrand() {
        let spec = QuadratureSpec {
            tolerance: 1.0,
            ..QuadratureSpec::default()
        };
        let f = |r: f64| Complex64::new(0.0, 2.0 * r).exp() / (1.0 + r);
        let g = |r: f64| c((-0.3 * r).exp() * r.sin());
        let a = Complex64::new(0.7, -1.3);
        let lhs = integrate_damped_oscillatory(|r| f(r) + a * g(r), 60.0, &spec).unwrap().value;
        let rf = integrate_damped_oscillatory(f, 60.0, &spec).unwrap().value;
        let rg = integrate_damped_oscillatory(g, 60.0, &spec).unwrap().value;
        assert!((lhs - rf - a * rg).norm() < 1e-10);
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = QuadratureSpec {
            damping_ladder: vec![0.1, 0.2],
            extrapolation_order: 1,
            ..QuadratureSpec::default()
        };
        assert!(spec.validate().is_err());
        let spec = QuadratureSpec {
            damping_ladder: vec![0.1],
            extrapolation_order: 1,
            ..QuadratureSpec::default()
        };
        assert!(spec.validate().is_err());
    }
}
