mod config;
mod eval;
mod figure;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use config::{load_config, CampaignConfig, FileConfig, Overrides, Suite};
use eval::{EvalArgs, Expr};
use figure::{FigureName, GridSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Waves(#[from] hyperfock::WavesError),
    #[error(transparent)]
    Fock(#[from] hyperfock::FockError),
    #[error(transparent)]
    Scattering(#[from] hyperfock::ScatteringError),
    #[error(transparent)]
    Kepler(#[from] hyperfock::KeplerError),
}

const EXIT_TOLERANCE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "hyperfock", version, about = "Verification campaigns, point evaluations and figure data")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (falls back to HYPERFOCK_OUT_DIR, then ./hyperfock-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Multiplies every tolerance.
    #[arg(long, global = true)]
    tol_scale: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites and write CSV reports.
    Run {
        /// Suite to run; repeat for several (default: all).
        #[arg(long = "suite")]
        suites: Vec<Suite>,
    },
    /// Evaluate one expression at one point and print "re im".
    Eval {
        expr: Expr,
        /// Point x, u or xi, comma separated; its length sets d.
        #[arg(long, alias = "u", alias = "xi", value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        /// Direction theta (default (1, 0, ...)).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Option<Vec<f64>>,
        /// Second direction for s_kernel.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta_p: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Write the data for one figure to <out>/<name>.csv.
    Figure {
        name: FigureName,
        /// Points per axis.
        #[arg(long)]
        n: Option<usize>,
        /// Half-width of the grid.
        #[arg(long)]
        extent: Option<f64>,
        /// Regularization for ft_field.
        #[arg(long)]
        eps: Option<f64>,
    },
}

fn campaign(cli: &Cli, suites: Vec<Suite>) -> Result<CampaignConfig, CliError> {
    let file = match &cli.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    CampaignConfig::resolve(
        file,
        Overrides {
            suites,
            out: cli.out.clone(),
            seed: cli.seed,
            tol_scale: cli.tol_scale,
        },
    )
}

fn run(cfg: &CampaignConfig) -> Result<bool, CliError> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    let results = cfg
        .suites
        .par_iter()
        .map(|&s| suites::run_suite(s, cfg).map(|rows| (s, rows)))
        .collect::<Result<Vec<_>, _>>()?;
    for (s, rows) in &results {
        report::write_rows(&cfg.output_dir.join(format!("{}.csv", s.name())), rows)?;
    }
    let summaries = report::write_summary(&cfg.output_dir, &results)?;
    for s in &summaries {
        println!(
            "{:<11} {:>4}/{:<4} passed  max error {:.2e}",
            s.suite, s.passed, s.rows, s.max_rel_error
        );
    }
    for (s, rows) in &results {
        for r in rows.iter().filter(|r| !r.pass) {
            eprintln!("FAIL {} {} {} d={} lambda={}: {:e} > {:e}", s, r.test_id, r.index, r.d, r.lambda, r.rel_error, r.tolerance);
        }
    }
    Ok(summaries.iter().all(|s| s.failed == 0))
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Run { suites } => {
            let cfg = campaign(&cli, suites.clone())?;
            run(&cfg)
        }
        Command::Eval {
            expr,
            x,
            theta,
            theta_p,
            hbar,
            lambda,
        } => {
            let v = eval::evaluate(&EvalArgs {
                expr: *expr,
                x: x.clone(),
                theta: theta.clone(),
                theta_p: theta_p.clone(),
                hbar: *hbar,
                lambda: *lambda,
            })?;
            println!("{:.17e} {:.17e}", v.re, v.im);
            Ok(true)
        }
        Command::Figure { name, n, extent, eps } => {
            let cfg = campaign(&cli, Vec::new())?;
            let f = &cfg.file.figures;
            let grid = GridSpec {
                n: n.unwrap_or(f.n),
                extent: *extent,
                eps: eps.unwrap_or(f.eps),
            };
            std::fs::create_dir_all(&cfg.output_dir)?;
            for data in figure::figure(*name, &grid)? {
                let path = cfg.output_dir.join(format!("{}.csv", data.name));
                figure::write_figure(&path, &data)?;
                println!("{}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_TOLERANCE),
        Err(e) => {
            eprintln!("hyperfock: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
