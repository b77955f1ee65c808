use std::f64::consts::PI;

use num_complex::Complex64;

use super::WavesError;
use crate::numerics::gauss_legendre;
use crate::specfun::log_gamma;

/// Surface area |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2) of the unit sphere in R^n.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / log_gamma(Complex64::new(h, 0.0)).re.exp()
}

/// Number of real harmonics of degree l on S^{d-1} (d = 2 or 3).
pub fn harmonic_count(d: usize, l: usize) -> usize {
    match (d, l) {
        (2, 0) => 1,
        (2, _) => 2,
        _ => 2 * l + 1,
    }
}

/// Real orthonormal harmonic of degree `l` and index `m` at the unit vector
/// `theta`.
///
/// d = 2: index 0 is cos(l phi)/sqrt(pi) (1/sqrt(2 pi) for l = 0), index 1
/// is sin(l phi)/sqrt(pi). d = 3: index k is the real spherical harmonic of
/// order m = k - l (cos for m > 0, sin for m < 0).
pub fn real_harmonic(l: usize, m: usize, theta: &[f64]) -> f64 {
    match theta.len() {
        2 => {
            let phi = theta[1].atan2(theta[0]);
            if l == 0 {
                1.0 / (2.0 * PI).sqrt()
            } else if m == 0 {
                (l as f64 * phi).cos() / PI.sqrt()
            } else {
                (l as f64 * phi).sin() / PI.sqrt()
            }
        }
        3 => {
            let order = m as i64 - l as i64;
            let ma = order.unsigned_abs() as usize;
            let z = theta[2].clamp(-1.0, 1.0);
            let p = normalized_legendre(l, ma, z);
            let phi = theta[1].atan2(theta[0]);
            match order {
                0 => p,
                o if o > 0 => 2f64.sqrt() * p * (ma as f64 * phi).cos(),
                _ => 2f64.sqrt() * p * (ma as f64 * phi).sin(),
            }
        }
        n => panic!("real harmonics implemented for d = 2, 3 (got {n})"),
    }
}

/// sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(z), without the Condon-Shortley
/// phase.
fn normalized_legendre(l: usize, m: usize, z: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let s = (1.0 - z * z).max(0.0).sqrt();
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut prev = pmm;
    let mut cur = (2.0 * mf + 3.0).sqrt() * z * pmm;
    for n in (m + 2)..=l {
        let nf = n as f64;
        let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
        let b = (((nf - 1.0).powi(2) - mf * mf) / (4.0 * (nf - 1.0).powi(2) - 1.0)).sqrt();
        let next = a * (z * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// A unit vector on S^{d-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereDirection(Vec<f64>);

impl SphereDirection {
    /// Accepts `v` if |v| = 1 within 1e-12.
    pub fn new(v: Vec<f64>) -> Result<Self, WavesError> {
        let n = norm(&v);
        if v.len() < 2 || (n - 1.0).abs() > 1e-12 {
            return Err(WavesError::InvalidArgument(format!("not a unit vector: {v:?}")));
        }
        Ok(Self(v))
    }

    /// Normalizes a nonzero vector.
    pub fn from_vector(v: &[f64]) -> Result<Self, WavesError> {
        let n = norm(v);
        if v.len() < 2 || !(n > 0.0) || !n.is_finite() {
            return Err(WavesError::InvalidArgument(format!("cannot normalize {v:?}")));
        }
        Ok(Self(v.iter().map(|x| x / n).collect()))
    }

    /// First coordinate axis in R^d.
    pub fn axis(d: usize) -> Self {
        let mut v = vec![0.0; d];
        v[0] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Direction of x; an arbitrary fixed direction at the origin.
pub(crate) fn direction(x: &[f64]) -> Vec<f64> {
    let n = norm(x);
    if n == 0.0 {
        let mut v = vec![0.0; x.len()];
        *v.last_mut().unwrap() = 1.0;
        v
    } else {
        x.iter().map(|c| c / n).collect()
    }
}

/// Quadrature on S^{d-1}: trapezoid on the circle, Gauss-Legendre in
/// cos(polar angle) times trapezoid in azimuth on S^2.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(d: usize, n_polar: usize, n_azimuth: usize) -> Result<Self, WavesError> {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match d {
            2 => {
                let h = 2.0 * PI / n_azimuth as f64;
                for j in 0..n_azimuth {
                    let phi = j as f64 * h;
                    nodes.push(vec![phi.cos(), phi.sin()]);
                    weights.push(h);
                }
            }
            3 => {
                let polar = gauss_legendre(n_polar).map_err(WavesError::Numerics)?;
                let h = 2.0 * PI / n_azimuth as f64;
                for (&z, &w) in polar.nodes.iter().zip(&polar.weights) {
                    let s = (1.0 - z * z).sqrt();
                    for j in 0..n_azimuth {
                        let phi = (j as f64 + 0.5) * h;
                        nodes.push(vec![s * phi.cos(), s * phi.sin(), z]);
                        weights.push(w * h);
                    }
                }
            }
            _ => return Err(WavesError::Unsupported(format!("sphere quadrature for d = {d}"))),
        }
        Ok(Self { nodes, weights })
    }

    /// 128-point trapezoid (d = 2) or 64 x 128 product rule (d = 3).
    pub fn standard(d: usize) -> Result<Self, WavesError> {
        Self::new(d, 64, 128)
    }

    pub fn integrate<F: Fn(&[f64]) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(n, &w)| f(n) * w)
            .sum()
    }
}

/// Truncated harmonic expansion of f in L^2(S^{d-1}), d in {2, 3}.
/// `coefficients[l][m]` multiplies `real_harmonic(l, m, .)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    d: usize,
    coefficients: Vec<Vec<Complex64>>,
}

impl BoundaryData {
    pub fn new(d: usize, coefficients: Vec<Vec<Complex64>>) -> Result<Self, WavesError> {
        if d != 2 && d != 3 {
            return Err(WavesError::Unsupported(format!("boundary data for d = {d}")));
        }
        if coefficients.is_empty() {
            return Err(WavesError::InvalidArgument("empty expansion".into()));
        }
        for (l, row) in coefficients.iter().enumerate() {
            if row.len() != harmonic_count(d, l) {
                return Err(WavesError::InvalidArgument(format!(
                    "degree {l} needs {} coefficients, got {}",
                    harmonic_count(d, l),
                    row.len()
                )));
            }
        }
        Ok(Self { d, coefficients })
    }

    /// Expansion with coefficient `value(l, m)` for every l <= l_max.
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(d: usize, l_max: usize, mut value: F) -> Result<Self, WavesError> {
        let coefficients = (0..=l_max)
            .map(|l| (0..harmonic_count(d, l)).map(|m| value(l, m)).collect())
            .collect();
        Self::new(d, coefficients)
    }

    /// A single basis harmonic.
    pub fn single_mode(d: usize, l: usize, m: usize) -> Result<Self, WavesError> {
        if m >= harmonic_count(d, l) {
            return Err(WavesError::InvalidArgument(format!("no harmonic ({l}, {m}) for d = {d}")));
        }
        Self::from_fn(d, l, |a, b| {
            if (a, b) == (l, m) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn l_max(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Vec<Complex64>] {
        &self.coefficients
    }

    /// ||f||_{L^2(S^{d-1})}.
    pub fn l2_norm(&self) -> f64 {
        self.coefficients
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// f(theta).
    pub fn evaluate(&self, theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, row) in self.coefficients.iter().enumerate() {
            for (m, &c) in row.iter().enumerate() {
                if c != Complex64::new(0.0, 0.0) {
                    acc += c * real_harmonic(l, m, theta);
                }
            }
        }
        acc
    }
}
