use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HYPERFOCK_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "hyperfock-out";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma,
    Theorem,
    Repulsive,
    Scattering,
    Moser,
    Inversion,
    Figures,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma,
        Suite::Theorem,
        Suite::Repulsive,
        Suite::Scattering,
        Suite::Moser,
        Suite::Inversion,
        Suite::Figures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma => "lemma",
            Suite::Theorem => "theorem",
            Suite::Repulsive => "repulsive",
            Suite::Scattering => "scattering",
            Suite::Moser => "moser",
            Suite::Inversion => "inversion",
            Suite::Figures => "figures",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Direct 2-D Fourier transform against the closed form.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaConfig {
    pub lambda: Vec<f64>,
    pub xi: Vec<[f64; 2]>,
    pub extrapolation_order: usize,
    pub tol: f64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self {
            lambda: vec![1.0],
            xi: vec![[2.0, 0.5], [0.4, 0.1], [-1.5, 1.0]],
            extrapolation_order: 5,
            tol: 1e-3,
        }
    }
}

/// Partial-wave grid for the Coulomb and repulsive maps.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapGridConfig {
    pub d: Vec<usize>,
    pub lambda: Vec<f64>,
    pub l_max: usize,
    pub rho: Vec<f64>,
    pub tol: f64,
}

impl Default for MapGridConfig {
    fn default() -> Self {
        Self {
            d: vec![2, 3],
            lambda: vec![1.0, 2.0],
            l_max: 4,
            rho: vec![0.25, 0.5, 0.75],
            tol: 1e-5,
        }
    }
}

/// The repulsive grid: same keys, smaller default grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RepulsiveConfig {
    pub d: Vec<usize>,
    pub lambda: Vec<f64>,
    pub l_max: usize,
    pub rho: Vec<f64>,
    pub tol: f64,
}

impl Default for RepulsiveConfig {
    fn default() -> Self {
        let g = MapGridConfig::default();
        Self {
            d: vec![2],
            lambda: g.lambda,
            l_max: 2,
            rho: g.rho,
            tol: 1e-4,
        }
    }
}

impl From<&RepulsiveConfig> for MapGridConfig {
    fn from(r: &RepulsiveConfig) -> Self {
        Self {
            d: r.d.clone(),
            lambda: r.lambda.clone(),
            l_max: r.l_max,
            rho: r.rho.clone(),
            tol: r.tol,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatteringConfig {
    pub d: Vec<usize>,
    pub lambda: Vec<f64>,
    pub l_max: usize,
    pub tol_unitarity: f64,
    pub tol_funk_hecke: f64,
}

impl Default for ScatteringConfig {
    fn default() -> Self {
        Self {
            d: vec![2, 3],
            lambda: vec![0.5, 1.0, 2.0],
            l_max: 6,
            tol_unitarity: 1e-12,
            tol_funk_hecke: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MoserConfig {
    pub samples: usize,
    pub energy_min: f64,
    pub energy_max: f64,
    pub tol_roundtrip: f64,
    pub tol_shell: f64,
    pub tol_identity: f64,
}

impl Default for MoserConfig {
    fn default() -> Self {
        Self {
            samples: 100,
            energy_min: 0.1,
            energy_max: 3.0,
            tol_roundtrip: 1e-12,
            tol_shell: 1e-10,
            tol_identity: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InversionConfig {
    pub d: Vec<usize>,
    pub lambda: Vec<f64>,
    pub samples: usize,
    pub tol: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            d: vec![2, 3],
            lambda: vec![1.0, 2.0, -1.0],
            samples: 50,
            tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiguresConfig {
    pub n: usize,
    pub eps: f64,
    pub tol: f64,
}

impl Default for FiguresConfig {
    fn default() -> Self {
        Self {
            n: 101,
            eps: 0.05,
            tol: 1e-12,
        }
    }
}

/// Contents of a config file: top-level keys plus one section per suite.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub suites: Option<Vec<Suite>>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol_scale: Option<f64>,
    pub lemma: LemmaConfig,
    pub theorem: MapGridConfig,
    pub repulsive: RepulsiveConfig,
    pub scattering: ScatteringConfig,
    pub moser: MoserConfig,
    pub inversion: InversionConfig,
    pub figures: FiguresConfig,
}

/// A fully resolved campaign.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub suites: Vec<Suite>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub tol_scale: f64,
    pub file: FileConfig,
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suites: Vec<Suite>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol_scale: Option<f64>,
}

pub fn parse_config(text: &str) -> Result<FileConfig, CliError> {
    let file: FileConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    validate(&file)?;
    Ok(file)
}

pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

impl CampaignConfig {
    pub fn resolve(file: FileConfig, over: Overrides) -> Result<Self, CliError> {
        let suites = if !over.suites.is_empty() {
            over.suites
        } else {
            file.suites.clone().unwrap_or_else(|| Suite::ALL.to_vec())
        };
        let output_dir = over
            .out
            .or_else(|| file.out.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let tol_scale = over.tol_scale.or(file.tol_scale).unwrap_or(1.0);
        if !(tol_scale > 0.0 && tol_scale.is_finite()) {
            return Err(CliError::Config(format!("tol-scale must be positive, got {tol_scale}")));
        }
        Ok(Self {
            suites,
            output_dir,
            seed: over.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            tol_scale,
            file,
        })
    }

    /// Tolerance after the global scale.
    pub fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

fn dims(name: &str, d: &[usize]) -> Result<(), CliError> {
    match d.iter().find(|&&d| d != 2 && d != 3) {
        Some(bad) => Err(CliError::Config(format!("{name}.d must be 2 or 3, got {bad}"))),
        None => Ok(()),
    }
}

fn lambdas(name: &str, l: &[f64]) -> Result<(), CliError> {
    match l.iter().find(|&&v| v == 0.0 || !v.is_finite()) {
        Some(bad) => Err(CliError::Config(format!("{name}.lambda must be finite and nonzero, got {bad}"))),
        None => Ok(()),
    }
}

fn validate(f: &FileConfig) -> Result<(), CliError> {
    if let Some(s) = f.tol_scale {
        positive("tol_scale", s)?;
    }
    positive("lemma.tol", f.lemma.tol)?;
    lambdas("lemma", &f.lemma.lambda)?;
    for (name, g) in [("theorem", f.theorem.clone()), ("repulsive", MapGridConfig::from(&f.repulsive))] {
        positive(&format!("{name}.tol"), g.tol)?;
        dims(name, &g.d)?;
        lambdas(name, &g.lambda)?;
        if let Some(r) = g.rho.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(CliError::Config(format!("{name}.rho must lie in (0, 1), got {r}")));
        }
    }
    positive("scattering.tol_unitarity", f.scattering.tol_unitarity)?;
    positive("scattering.tol_funk_hecke", f.scattering.tol_funk_hecke)?;
    dims("scattering", &f.scattering.d)?;
    lambdas("scattering", &f.scattering.lambda)?;
    positive("moser.tol_roundtrip", f.moser.tol_roundtrip)?;
    positive("moser.tol_shell", f.moser.tol_shell)?;
    positive("moser.tol_identity", f.moser.tol_identity)?;
    if !(f.moser.energy_min > 0.0 && f.moser.energy_max > f.moser.energy_min) {
        return Err(CliError::Config("moser energies need 0 < energy_min < energy_max".into()));
    }
    positive("inversion.tol", f.inversion.tol)?;
    dims("inversion", &f.inversion.d)?;
    lambdas("inversion", &f.inversion.lambda)?;
    positive("figures.tol", f.figures.tol)?;
    positive("figures.eps", f.figures.eps)?;
    if f.figures.n < 2 {
        return Err(CliError::Config("figures.n must be at least 2".into()));
    }
    Ok(())
}
