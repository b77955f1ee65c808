use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hyperfock::fockmap::{
    fock_map_partial_wave, fourier_closed_form, fourier_numeric_2d, interior_branch_factor, inversion_symmetry_check,
    repulsive_map_partial_wave, HankelSpec,
};
use hyperfock::kepler::{conserved_quantities, moser_map, moser_map_inverse, KeplerSign, Sheet};
use hyperfock::scattering::{funk_hecke_eigenvalue, s_eigenvalue, FunkHeckeRule};
use hyperfock::waves::hyperbolic_partial_wave;
use hyperfock::{PhasePoint, SpectralParams, SphereDirection};

use crate::config::{CampaignConfig, MapGridConfig, Suite};
use crate::figure::{self, FigureName, GridSpec};
use crate::report::{Row, RowSpec};
use crate::CliError;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Runs one suite and returns its rows in a fixed order.
pub fn run_suite(suite: Suite, cfg: &CampaignConfig) -> Result<Vec<Row>, CliError> {
    Ok(match suite {
        Suite::Lemma => lemma(cfg),
        Suite::Theorem => map_grid(cfg, &cfg.file.theorem, "theorem", false),
        Suite::Repulsive => map_grid(cfg, &MapGridConfig::from(&cfg.file.repulsive), "repulsive", true),
        Suite::Scattering => scattering(cfg),
        Suite::Moser => moser(cfg),
        Suite::Inversion => inversion(cfg),
        Suite::Figures => figures(cfg)?,
    })
}

fn lemma(cfg: &CampaignConfig) -> Vec<Row> {
    let c = &cfg.file.lemma;
    let tol = cfg.tol(c.tol);
    let jobs: Vec<(f64, [f64; 2])> = c.lambda.iter().flat_map(|&l| c.xi.iter().map(move |&x| (l, x))).collect();
    jobs.par_iter()
        .map(|&(lam, xi)| {
            let spec = RowSpec {
                test_id: "fourier_2d",
                d: 2,
                hbar: 1.0,
                lambda: lam,
                index: format!("xi=({},{})", xi[0], xi[1]),
                tolerance: tol,
            };
            let th = SphereDirection::axis(2);
            let p = match SpectralParams::new(2, 1.0, lam) {
                Ok(p) => p,
                Err(e) => return spec.failed(e),
            };
            match (fourier_numeric_2d(&p, &xi, &th, None, c.extrapolation_order), fourier_closed_form(&p, &xi, &th)) {
                (Ok(n), Ok(w)) => spec.compare(n.value, w.value),
                (Err(e), _) => spec.failed(e),
                (_, Err(e)) => spec.failed(e),
            }
        })
        .collect()
}

fn map_grid(cfg: &CampaignConfig, g: &MapGridConfig, test_id: &'static str, repulsive: bool) -> Vec<Row> {
    let tol = cfg.tol(g.tol);
    let hankel = HankelSpec::default();
    let mut jobs = Vec::new();
    for &d in &g.d {
        for &lam in &g.lambda {
            for l in 0..=g.l_max {
                for &rho in &g.rho {
                    jobs.push((d, lam, l, rho));
                }
            }
        }
    }
    jobs.par_iter()
        .flat_map_iter(|&(d, lam, l, rho)| {
            let spec = |test_id: &'static str| RowSpec {
                test_id,
                d,
                hbar: 1.0,
                lambda: lam,
                index: format!("l={l} rho={rho}"),
                tolerance: tol,
            };
            let p = match SpectralParams::new(d, 1.0, lam) {
                Ok(p) => p,
                Err(e) => return vec![spec(test_id).failed(e)],
            };
            let got = if repulsive {
                repulsive_map_partial_wave(&p, l, rho, &hankel)
            } else {
                fock_map_partial_wave(&p, l, rho, &hankel)
            };
            let got = match got {
                Ok(g) => g,
                Err(e) => return vec![spec(test_id).failed(e)],
            };
            let row = |test_id, lam| match hyperbolic_partial_wave(lam, d, l, rho) {
                Ok(w) => spec(test_id).compare(got, w),
                Err(e) => spec(test_id).failed(e),
            };
            let mut rows = vec![row(test_id, lam)];
            // The repulsive image is also compared with the wave at -lambda.
            if repulsive {
                rows.push(row("repulsive_at_minus_lambda", -lam));
            }
            rows
        })
        .collect()
}

fn scattering(cfg: &CampaignConfig) -> Vec<Row> {
    let c = &cfg.file.scattering;
    let rule = FunkHeckeRule::default();
    let mut jobs = Vec::new();
    for &d in &c.d {
        for &lam in &c.lambda {
            for l in 0..=c.l_max {
                jobs.push((d, lam, l));
            }
        }
    }
    jobs.par_iter()
        .flat_map_iter(|&(d, lam, l)| {
            let spec = |test_id: &'static str, tol: f64| RowSpec {
                test_id,
                d,
                hbar: 1.0,
                lambda: lam,
                index: format!("l={l}"),
                tolerance: cfg.tol(tol),
            };
            let mut rows = Vec::with_capacity(3);
            match (s_eigenvalue(lam, d, l), s_eigenvalue(-lam, d, l)) {
                (Ok(s), Ok(sm)) => {
                    rows.push(spec("unitarity", c.tol_unitarity).compare(real(s.norm()), one()));
                    rows.push(spec("involution", c.tol_unitarity).compare(s * sm, one()));
                    rows.push(match funk_hecke_eigenvalue(lam, d, l, &rule) {
                        Ok(q) => spec("funk_hecke", c.tol_funk_hecke).compare(q, s),
                        Err(e) => spec("funk_hecke", c.tol_funk_hecke).failed(e),
                    });
                }
                (Err(e), _) | (_, Err(e)) => rows.push(spec("unitarity", c.tol_unitarity).failed(e)),
            }
            rows
        })
        .collect()
}

fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|c| c / n).collect();
        }
    }
}

struct MoserSample {
    d: usize,
    energy: f64,
    sign: KeplerSign,
    free: PhasePoint,
    on_shell: PhasePoint,
}

fn moser(cfg: &CampaignConfig) -> Vec<Row> {
    let c = &cfg.file.moser;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<MoserSample> = (0..c.samples)
        .map(|k| {
            let d = 2 + k % 2;
            let energy = rng.gen_range(c.energy_min..c.energy_max);
            let sign = if k % 4 < 2 { KeplerSign::Attractive } else { KeplerSign::Repulsive };
            let free = PhasePoint::new(
                (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect(),
                (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect(),
            );
            // The repulsive shell needs |x| > 1/E.
            let r = match sign {
                KeplerSign::Attractive => rng.gen_range(0.2..4.0),
                KeplerSign::Repulsive => rng.gen_range(1.2..4.0) / energy,
            };
            let x: Vec<f64> = unit_vector(&mut rng, d).iter().map(|v| r * v).collect();
            let pot = match sign {
                KeplerSign::Attractive => 1.0 / r,
                KeplerSign::Repulsive => -1.0 / r,
            };
            let k = (2.0 * (energy + pot)).sqrt();
            let xi = unit_vector(&mut rng, d).iter().map(|v| k * v).collect();
            MoserSample {
                d,
                energy,
                sign,
                free,
                on_shell: PhasePoint::new(x, xi),
            }
        })
        .collect();
    samples
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, s)| {
            let spec = |test_id: &'static str, tol: f64| RowSpec {
                test_id,
                d: s.d,
                hbar: 1.0,
                lambda: 1.0 / (2.0 * s.energy).sqrt(),
                index: format!("sample={k}"),
                tolerance: cfg.tol(tol),
            };
            let mut rows = Vec::with_capacity(3);
            rows.push(match moser_map(s.energy, &s.free).and_then(|q| moser_map_inverse(s.energy, &q)) {
                Ok(b) => {
                    let err = b
                        .x
                        .iter()
                        .zip(&s.free.x)
                        .chain(b.xi.iter().zip(&s.free.xi))
                        .map(|(a, c)| (a - c).abs() / (1.0 + c.abs()))
                        .fold(0.0, f64::max);
                    spec("roundtrip", c.tol_roundtrip).with_error(real(err), real(0.0), err)
                }
                Err(e) => spec("roundtrip", c.tol_roundtrip).failed(e),
            });
            rows.push(match moser_map(s.energy, &s.on_shell) {
                Ok(q) => {
                    let want = match s.sign {
                        KeplerSign::Attractive => Sheet::Ball,
                        KeplerSign::Repulsive => Sheet::Exterior,
                    };
                    let row = spec("on_shell", c.tol_shell).compare(real(q.covector_norm()), one());
                    if q.sheet() == want {
                        row
                    } else {
                        spec("on_shell", c.tol_shell).failed("wrong sheet")
                    }
                }
                Err(e) => spec("on_shell", c.tol_shell).failed(e),
            });
            rows.push(match conserved_quantities(s.sign, &s.free) {
                Ok(q) => {
                    let err = q.identity_defect();
                    spec("runge_lenz_identity", c.tol_identity).with_error(real(err), real(0.0), err)
                }
                Err(e) => spec("runge_lenz_identity", c.tol_identity).failed(e),
            });
            rows
        })
        .collect()
}

fn inversion(cfg: &CampaignConfig) -> Vec<Row> {
    let c = &cfg.file.inversion;
    let tol = cfg.tol(c.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut jobs = Vec::new();
    for &d in &c.d {
        for &lam in &c.lambda {
            for k in 0..c.samples {
                let r = rng.gen_range(0.05..0.95);
                let xi: Vec<f64> = unit_vector(&mut rng, d).iter().map(|v| r * v).collect();
                jobs.push((d, lam, k, xi));
            }
        }
    }
    let mut rows: Vec<Row> = jobs
        .par_iter()
        .map(|(d, lam, k, xi)| {
            let spec = RowSpec {
                test_id: "inversion_symmetry",
                d: *d,
                hbar: 1.0,
                lambda: *lam,
                index: format!("sample={k}"),
                tolerance: tol,
            };
            let p = match SpectralParams::new(*d, 1.0, *lam) {
                Ok(p) => p,
                Err(e) => return spec.failed(e),
            };
            match inversion_symmetry_check(&p, xi, &SphereDirection::axis(*d)) {
                Ok(chk) => spec.with_error(chk.lhs, chk.rhs, chk.deviation),
                Err(e) => spec.failed(e),
            }
        })
        .collect();
    for &lam in &c.lambda {
        let spec = RowSpec {
            test_id: "branch_factor",
            d: 0,
            hbar: 1.0,
            lambda: lam,
            index: "interior".into(),
            tolerance: tol,
        };
        rows.push(spec.compare(interior_branch_factor(lam), real(-(-PI * lam.abs()).exp())));
    }
    rows
}

fn figures(cfg: &CampaignConfig) -> Result<Vec<Row>, CliError> {
    let c = &cfg.file.figures;
    let dir = cfg.output_dir.join("figures");
    std::fs::create_dir_all(&dir)?;
    let grid = GridSpec {
        n: c.n,
        extent: None,
        eps: c.eps,
    };
    let tol = cfg.tol(c.tol);
    let mut rows = Vec::new();
    for name in FigureName::ALL {
        for data in figure::figure(name, &grid)? {
            figure::write_figure(&dir.join(format!("{}.csv", data.name)), &data)?;
        }
    }
    let spec = |test_id: &'static str, index: &str| RowSpec {
        test_id,
        d: 2,
        hbar: 1.0,
        lambda: 1.0,
        index: index.into(),
        tolerance: tol,
    };
    let at_origin = |name| figure::value_at(name, &[0.0, 0.0], &grid);
    rows.push(match at_origin(FigureName::PpwHyperbolic) {
        Ok(v) => spec("ppw_hyperbolic", "u=(0,0)").compare(real(v), one()),
        Err(e) => spec("ppw_hyperbolic", "u=(0,0)").failed(e),
    });
    rows.push(match at_origin(FigureName::PpwCoulomb) {
        Ok(v) => spec("ppw_coulomb", "x=(0,0)").compare(real(v), real(figure::coulomb_origin_value())),
        Err(e) => spec("ppw_coulomb", "x=(0,0)").failed(e),
    });
    let defect = figure::level_set_defect(&grid)?;
    rows.push(spec("level_sets", "contour").with_error(real(defect), real(0.0), defect));
    Ok(rows)
}
