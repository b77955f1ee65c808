use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::NumericsError;
use crate::specfun::log_gamma;

/// Nodes and weights of a real interpolatory rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Applies the rule to `f` on [-1, 1] (weight function implied by the rule).
    pub fn apply<T, F>(&self, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&x, &w)| acc + f(x) * w)
    }

    /// Integrates `f` over [a, b] with the rule mapped affinely.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.apply(|t| f(mid + half * t)) * half
    }
}

/// Nodes and weights of a Gauss rule whose weight function has complex
/// exponents; nodes leave the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

impl ComplexRule {
    pub fn apply<F: FnMut(Complex64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

fn legendre_cache() -> &'static Mutex<HashMap<usize, Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared handle to a cached Gauss-Legendre rule.
pub(crate) fn legendre_rule(n: usize) -> Arc<GaussRule> {
    assert!(n >= 1, "Gauss-Legendre rule needs n >= 1");
    if let Some(rule) = legendre_cache().lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_legendre(n));
    legendre_cache()
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&rule));
    rule
}

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> Result<GaussRule, NumericsError> {
    if n == 0 {
        return Err(NumericsError::InvalidArgument(
            "Gauss-Legendre rule needs n >= 1".into(),
        ));
    }
    Ok((*legendre_rule(n)).clone())
}

fn build_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi's initial guess, then Newton on the three-term recurrence.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Three-term recurrence coefficients (alpha_k, beta_k) of the monic Jacobi
/// polynomials for weight (1-t)^a (1+t)^b; beta_0 is unused.
fn jacobi_recurrence(n: usize, a: Complex64, b: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut alpha = vec![Complex64::new(0.0, 0.0); n];
    let mut beta = vec![Complex64::new(0.0, 0.0); n];
    let ab = a + b;
    for k in 0..n {
        let kf = k as f64;
        alpha[k] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((ab + 2.0 * kf) * (ab + 2.0 * kf + 2.0))
        };
        if k == 1 {
            beta[k] = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else if k >= 2 {
            let s = ab + 2.0 * kf;
            beta[k] = 4.0 * kf * (a + kf) * (b + kf) * (ab + kf) / (s * s * (s + 1.0) * (s - 1.0));
        }
    }
    (alpha, beta)
}

fn jacobi_mass(a: Complex64, b: Complex64) -> Complex64 {
    let ln2 = std::f64::consts::LN_2;
    ((a + b + 1.0) * ln2 + log_gamma(a + 1.0) + log_gamma(b + 1.0) - log_gamma(a + b + 2.0)).exp()
}

/// Orthonormal recurrence: returns (p_n(x), p_n'(x), sum_{k<n} p_k(x)^2).
fn orthonormal_eval(
    x: Complex64,
    alpha: &[Complex64],
    sqrt_beta: &[Complex64],
    sqrt_beta_n: Complex64,
    mass: Complex64,
) -> (Complex64, Complex64, Complex64) {
    let n = alpha.len();
    let mut p_prev = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0) / mass.sqrt();
    let mut dp_prev = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut sum = p * p;
    for k in 0..n {
        let b_next = if k + 1 < n { sqrt_beta[k + 1] } else { sqrt_beta_n };
        let b_k = sqrt_beta[k];
        let p_next = ((x - alpha[k]) * p - b_k * p_prev) / b_next;
        let dp_next = (p + (x - alpha[k]) * dp - b_k * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        if k + 1 < n {
            sum += p * p;
        }
    }
    (p, dp, sum)
}

/// n-point Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule, NumericsError> {
    if n == 0 {
        return Err(NumericsError::InvalidArgument("Gauss-Jacobi rule needs n >= 1".into()));
    }
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(NumericsError::InvalidArgument(format!(
            "Jacobi exponents must exceed -1 (got alpha={alpha}, beta={beta})"
        )));
    }
    if alpha == 0.0 && beta == 0.0 {
        return gauss_legendre(n);
    }
    let a = Complex64::new(alpha, 0.0);
    let b = Complex64::new(beta, 0.0);
    let (rec_a, rec_b) = jacobi_recurrence(n + 1, a, b);
    // Golub-Welsch eigenvalues of the symmetric Jacobi matrix give the nodes.
    let diag: Vec<f64> = rec_a[..n].iter().map(|z| z.re).collect();
    let off: Vec<f64> = (1..n).map(|k| rec_b[k].re.sqrt()).collect();
    let mut nodes = symmetric_tridiagonal_eigenvalues(&diag, &off);
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mass = jacobi_mass(a, b);
    let sqrt_beta: Vec<Complex64> = rec_b[..n].iter().map(|z| z.sqrt()).collect();
    let sqrt_beta_n = rec_b[n].sqrt();
    let alpha_c = &rec_a[..n];
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let mut z = Complex64::new(*x, 0.0);
        for _ in 0..3 {
            let (p, dp, _) = orthonormal_eval(z, alpha_c, &sqrt_beta, sqrt_beta_n, mass);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if step.norm() > 1e-8 {
                break;
            }
            z -= step;
        }
        let (_, _, sum) = orthonormal_eval(z, alpha_c, &sqrt_beta, sqrt_beta_n, mass);
        *x = z.re;
        weights.push(1.0 / sum.re);
    }
    Ok(GaussRule { nodes, weights })
}

/// n-point Gauss rule for the weight (1-t)^a (1+t)^b with complex a, b.
///
/// For Re a, Re b > -1 this integrates the weight against polynomials of
/// degree <= 2n-1 exactly. Outside that range the same nodes and weights
/// realize the analytic continuation in (a, b) of the weighted integral,
/// which is how conditionally convergent endpoint singularities such as
/// (1-t)^{-1+i lambda} are given a value.
pub fn complex_gauss_jacobi(n: usize, a: Complex64, b: Complex64) -> Result<ComplexRule, NumericsError> {
    if n == 0 {
        return Err(NumericsError::InvalidArgument("Gauss-Jacobi rule needs n >= 1".into()));
    }
    let is_pole = |z: Complex64| z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0;
    if is_pole(a + 1.0) || is_pole(b + 1.0) || is_pole(a + b + 2.0) {
        return Err(NumericsError::InvalidArgument(
            "Jacobi exponents hit a pole of the moment functional".into(),
        ));
    }
    let (rec_a, rec_b) = jacobi_recurrence(n + 1, a, b);
    let mass = jacobi_mass(a, b);
    let sqrt_beta: Vec<Complex64> = rec_b[..n].iter().map(|z| z.sqrt()).collect();
    let sqrt_beta_n = rec_b[n].sqrt();
    let alpha_c = &rec_a[..n];

    // Aberth-Ehrlich simultaneous iteration from slightly complexified
    // Legendre nodes; the recurrence gives p_n and p_n' directly.
    let start = legendre_rule(n);
    let mut z: Vec<Complex64> = start
        .nodes
        .iter()
        .enumerate()
        .map(|(k, &x)| Complex64::new(0.98 * x, 0.02 * ((k as f64) * 0.7).sin() + 0.01))
        .collect();
    let mut converged = false;
    let mut prev_step = f64::INFINITY;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        let ratios: Vec<Complex64> = z
            .iter()
            .map(|&zi| {
                let (p, dp, _) = orthonormal_eval(zi, alpha_c, &sqrt_beta, sqrt_beta_n, mass);
                p / dp
            })
            .collect();
        let snapshot = z.clone();
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &zj) in snapshot.iter().enumerate() {
                if j != i {
                    s += 1.0 / (snapshot[i] - zj);
                }
            }
            let step = ratios[i] / (1.0 - ratios[i] * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        // Below 1e-11 a step that no longer halves is rounding noise.
        if max_step < 1e-15 || (max_step < 1e-11 && max_step > 0.5 * prev_step) {
            converged = true;
            break;
        }
        prev_step = max_step;
    }
    if !converged {
        return Err(NumericsError::InvalidArgument(
            "complex Gauss-Jacobi node iteration failed to converge".into(),
        ));
    }
    let mut weights = Vec::with_capacity(n);
    for zi in z.iter_mut() {
        let (p, dp, _) = orthonormal_eval(*zi, alpha_c, &sqrt_beta, sqrt_beta_n, mass);
        let step = p / dp;
        if step.is_finite() && step.norm() < 1e-10 {
            *zi -= step;
        }
        let (_, _, sum) = orthonormal_eval(*zi, alpha_c, &sqrt_beta, sqrt_beta_n, mass);
        weights.push(1.0 / sum);
    }
    let mut pairs: Vec<(Complex64, Complex64)> = z.into_iter().zip(weights).collect();
    pairs.sort_by(|p, q| p.0.re.partial_cmp(&q.0.re).unwrap());
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(ComplexRule { nodes, weights })
}

/// Eigenvalues of a real symmetric tridiagonal matrix (implicit QL with
/// Wilkinson shifts).
fn symmetric_tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}
