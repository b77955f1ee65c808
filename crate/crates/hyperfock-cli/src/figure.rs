use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use rayon::prelude::*;

use hyperfock::fockmap::fourier_regularized;
use hyperfock::kepler::hamiltonian;
use hyperfock::waves::{coulomb_plane_wave, hyperbolic_plane_wave};
use hyperfock::{KeplerSign, PhasePoint, SpectralParams, SphereDirection};

use crate::CliError;

/// Figure data sets, all at d = 2, hbar = 1, lambda = 1, theta0 = (1, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    /// Re e^{i x_1}.
    #[value(name = "ppw_euclidean")]
    PpwEuclidean,
    /// (1/sqrt 2) Re psi, equal to 1 at the origin.
    #[value(name = "ppw_coulomb")]
    PpwCoulomb,
    /// Re e_1 on the unit disc.
    #[value(name = "ppw_hyperbolic")]
    PpwHyperbolic,
    /// Re of the regularized Fourier transform at eps.
    #[value(name = "ft_field")]
    FtField,
    /// H^+ and H^- on the one-dimensional phase plane, plus the E = 1/2 contours.
    #[value(name = "level_sets")]
    LevelSets,
}

impl FigureName {
    pub const ALL: [FigureName; 5] = [
        FigureName::PpwEuclidean,
        FigureName::PpwCoulomb,
        FigureName::PpwHyperbolic,
        FigureName::FtField,
        FigureName::LevelSets,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureName::PpwEuclidean => "ppw_euclidean",
            FigureName::PpwCoulomb => "ppw_coulomb",
            FigureName::PpwHyperbolic => "ppw_hyperbolic",
            FigureName::FtField => "ft_field",
            FigureName::LevelSets => "level_sets",
        }
    }

    fn default_extent(self) -> f64 {
        match self {
            FigureName::PpwEuclidean | FigureName::PpwCoulomb => 10.0,
            FigureName::PpwHyperbolic => 1.0,
            FigureName::FtField => 2.0,
            FigureName::LevelSets => 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Points per axis.
    pub n: usize,
    /// Half-width of the square grid; per-figure default when absent.
    pub extent: Option<f64>,
    /// Regularization for `ft_field`.
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

fn params() -> SpectralParams {
    SpectralParams::new(2, 1.0, 1.0).expect("fixed parameters are valid")
}

fn axis(n: usize, extent: f64) -> Vec<f64> {
    (0..n).map(|k| -extent + 2.0 * extent * k as f64 / (n - 1) as f64).collect()
}

/// Value of a two-dimensional figure at one point; `None` outside its domain.
fn sample(name: FigureName, p: &[f64], eps: f64) -> Result<Option<f64>, CliError> {
    let theta = SphereDirection::axis(2);
    Ok(match name {
        FigureName::PpwEuclidean => Some(p[0].cos()),
        FigureName::PpwCoulomb => Some(coulomb_plane_wave(&params(), p, &theta)?.re / 2f64.sqrt()),
        FigureName::PpwHyperbolic => {
            if p[0] * p[0] + p[1] * p[1] >= 1.0 {
                None
            } else {
                Some(hyperbolic_plane_wave(1.0, p, &theta)?.re)
            }
        }
        FigureName::FtField => Some(fourier_regularized(&params(), p, &theta, eps)?.re),
        FigureName::LevelSets => return Err(CliError::Usage("level_sets is not a planar field".into())),
    })
}

/// Value of a planar figure at one point.
pub fn value_at(name: FigureName, p: &[f64], grid: &GridSpec) -> Result<f64, CliError> {
    sample(name, p, grid.eps)?.ok_or_else(|| CliError::Usage(format!("{p:?} is outside the domain of {}", name.name())))
}

/// (1/sqrt 2) Re psi(0) = c / (sqrt 2 Gamma(1/2)) = 1 at d = 2, hbar = lambda = 1.
pub fn coulomb_origin_value() -> f64 {
    1.0
}

fn h(sign: KeplerSign, x: f64, xi: f64) -> Result<f64, CliError> {
    Ok(hamiltonian(sign, &PhasePoint::new(vec![x], vec![xi]))?)
}

/// Points (branch, x, xi) on H^+ = 1/2 (branch 1) and H^- = 1/2 (branch -1).
fn contour(xs: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &x in xs.iter().filter(|x| **x != 0.0) {
        let r = x.abs();
        let k = (1.0 + 2.0 / r).sqrt();
        out.push((1.0, x, k));
        out.push((1.0, x, -k));
        if r >= 2.0 {
            let k = (1.0 - 2.0 / r).sqrt();
            out.push((-1.0, x, k));
            out.push((-1.0, x, -k));
        }
    }
    out
}

fn level_sets(grid: &GridSpec) -> Result<Vec<FigureData>, CliError> {
    let extent = grid.extent.unwrap_or(FigureName::LevelSets.default_extent());
    let xs = axis(grid.n, extent);
    let mut field = Vec::with_capacity(grid.n * grid.n);
    for &x in xs.iter().filter(|x| **x != 0.0) {
        for &xi in &xs {
            field.push(vec![x, xi, h(KeplerSign::Attractive, x, xi)?, h(KeplerSign::Repulsive, x, xi)?]);
        }
    }
    let mut lines = Vec::new();
    for (branch, x, xi) in contour(&xs) {
        let sign = if branch > 0.0 { KeplerSign::Attractive } else { KeplerSign::Repulsive };
        lines.push(vec![branch, x, xi, h(sign, x, xi)?]);
    }
    Ok(vec![
        FigureData {
            name: "level_sets".into(),
            columns: vec!["x", "xi", "h_plus", "h_minus"],
            rows: field,
        },
        FigureData {
            name: "level_sets_contour".into(),
            columns: vec!["branch", "x", "xi", "h"],
            rows: lines,
        },
    ])
}

/// Largest |H - 1/2| over the emitted contour points.
pub fn level_set_defect(grid: &GridSpec) -> Result<f64, CliError> {
    let sets = level_sets(grid)?;
    Ok(sets[1].rows.iter().map(|r| (r[3] - 0.5).abs()).fold(0.0, f64::max))
}

/// Computes the data for one figure; `level_sets` yields the field and its contour.
pub fn figure(name: FigureName, grid: &GridSpec) -> Result<Vec<FigureData>, CliError> {
    if grid.n < 2 {
        return Err(CliError::Usage("figures need at least 2 points per axis".into()));
    }
    if name == FigureName::LevelSets {
        return level_sets(grid);
    }
    let xs = axis(grid.n, grid.extent.unwrap_or(name.default_extent()));
    let points: Vec<[f64; 2]> = xs.iter().flat_map(|&x| xs.iter().map(move |&y| [x, y])).collect();
    let values = points
        .par_iter()
        .map(|p| sample(name, p, grid.eps))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = points
        .iter()
        .zip(values)
        .filter_map(|(p, v)| v.map(|v| vec![p[0], p[1], v]))
        .collect();
    Ok(vec![FigureData {
        name: name.name().into(),
        columns: vec!["x", "y", "value"],
        rows,
    }])
}

/// CSV with a `# figure=...,d=2,hbar=1,lambda=1` header line.
pub fn write_figure(path: &Path, data: &FigureData) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# figure={},d=2,hbar=1,lambda=1", data.name)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&data.columns)?;
    for r in &data.rows {
        csv.write_record(r.iter().map(|v| v.to_string()))?;
    }
    csv.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: GridSpec = GridSpec { n: 11, extent: None, eps: 0.05 };

    #[test]
    fn origin_values() {
        assert!((value_at(FigureName::PpwHyperbolic, &[0.0, 0.0], &GRID).unwrap() - 1.0).abs() < 1e-15);
        let c = value_at(FigureName::PpwCoulomb, &[0.0, 0.0], &GRID).unwrap();
        assert!((c - coulomb_origin_value()).abs() < 1e-12, "{c}");
    }

    #[test]
    fn hyperbolic_figure_stays_in_the_disc() {
        let f = &figure(FigureName::PpwHyperbolic, &GRID).unwrap()[0];
        assert!(!f.rows.is_empty());
        assert!(f.rows.iter().all(|r| r[0] * r[0] + r[1] * r[1] < 1.0));
    }

    #[test]
    fn contour_lies_on_the_energy_shell() {
        assert!(level_set_defect(&GRID).unwrap() < 1e-14);
        let sets = figure(FigureName::LevelSets, &GRID).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(sets[1].rows.iter().any(|r| r[0] < 0.0));
    }
}
