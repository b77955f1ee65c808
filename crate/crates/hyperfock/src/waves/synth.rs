use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    direction, norm, partial_wave, plane_wave, real_harmonic, BoundaryData, SpectralParams, SphereDirection, SphereRule,
    WaveKind, WavesError,
};

/// Samples of a generalized eigenfunction on a list of points.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub grid: Vec<Vec<f64>>,
    pub values: Vec<Complex64>,
    pub kind: WaveKind,
    pub params: SpectralParams,
}

impl WaveField {
    pub fn new(grid: Vec<Vec<f64>>, values: Vec<Complex64>, kind: WaveKind, params: SpectralParams) -> Result<Self, WavesError> {
        if grid.len() != values.len() {
            return Err(WavesError::InvalidArgument("grid and values differ in length".into()));
        }
        if kind == WaveKind::Hyperbolic && grid.iter().any(|u| norm(u) >= 1.0) {
            return Err(WavesError::OutsideDomain("hyperbolic field needs |u| < 1".into()));
        }
        Ok(Self { grid, values, kind, params })
    }

    /// CSV with a `# kind=...,d=...,hbar=...,lambda=...` header line, then
    /// columns x1..xd, re, im.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let p = &self.params;
        writeln!(w, "# kind={},d={},hbar={},lambda={}", self.kind, p.d, p.hbar, p.lambda)?;
        let cols: Vec<String> = (1..=p.d).map(|i| format!("x{i}")).collect();
        writeln!(w, "{},re,im", cols.join(","))?;
        for (x, v) in self.grid.iter().zip(&self.values) {
            for c in x {
                write!(w, "{c},")?;
            }
            writeln!(w, "{},{}", v.re, v.im)?;
        }
        Ok(())
    }
}

fn check_point(kind: WaveKind, d: usize, x: &[f64]) -> Result<(), WavesError> {
    if x.len() != d {
        return Err(WavesError::InvalidArgument(format!("point {x:?} is not in R^{d}")));
    }
    if kind == WaveKind::Hyperbolic && norm(x) >= 1.0 {
        return Err(WavesError::OutsideDomain(format!("hyperbolic point {x:?} outside the unit ball")));
    }
    Ok(())
}

fn synthesize_point(kind: WaveKind, params: &SpectralParams, f: &BoundaryData, x: &[f64]) -> Result<Complex64, WavesError> {
    check_point(kind, params.d, x)?;
    let r = norm(x);
    let xhat = direction(x);
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, row) in f.coefficients().iter().enumerate() {
        let angular: Complex64 = row.iter().enumerate().map(|(m, &c)| c * real_harmonic(l, m, &xhat)).sum();
        if angular == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += partial_wave(kind, params, l, r)? * angular;
    }
    Ok(acc)
}

/// Poisson operator applied to `f` at every point, partial wave by partial
/// wave: F(x) = sum_{l,m} f_{lm} radial_l(|x|) Y_l^m(x/|x|). Points are
/// evaluated in parallel.
pub fn poisson_synthesize(
    kind: WaveKind,
    params: &SpectralParams,
    f: &BoundaryData,
    points: &[Vec<f64>],
) -> Result<WaveField, WavesError> {
    if f.dim() != params.d {
        return Err(WavesError::InvalidArgument("boundary data dimension differs from params.d".into()));
    }
    let values = points
        .par_iter()
        .map(|x| synthesize_point(kind, params, f, x))
        .collect::<Result<Vec<_>, _>>()?;
    WaveField::new(points.to_vec(), values, kind, *params)
}

/// Direct quadrature of the plane-wave kernel against f:
/// int_{S^{d-1}} kernel(x; theta) f(theta) d theta.
pub fn poisson_quadrature(
    kind: WaveKind,
    params: &SpectralParams,
    f: &BoundaryData,
    x: &[f64],
    rule: &SphereRule,
) -> Result<Complex64, WavesError> {
    check_point(kind, params.d, x)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let th = SphereDirection::new(t.clone())?;
        acc += plane_wave(kind, params, x, &th)? * f.evaluate(t) * w;
    }
    Ok(acc)
}
