//! Acceptance run: one pass/fail line per criterion, exit status 1 if any
//! criterion outside `KNOWN_FAILURES` fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperfock::fockmap::{
    appendix_i_integral, appendix_i_integral_conical, appendix_i_integral_cosh, fock_map_partial_wave,
    fourier_closed_form, fourier_numeric_2d, interior_branch_factor, inversion_symmetry_check,
    repulsive_map_partial_wave, HankelSpec,
};
use hyperfock::kepler::{
    conserved_quantities, flow_correspondence_check, hamiltonian, kepler_flow, kepler_period,
    kepler_third_law_check, moser_map, moser_map_inverse, symplectic_pullback_check, HyperbolicCotangentPoint,
    KeplerSign, Sheet,
};
use hyperfock::scattering::{funk_hecke_eigenvalue, s_eigenvalue, FunkHeckeRule};
use hyperfock::specfun::{bessel_j, conical_legendre_p, log_gamma, olver_m, olver_m_asymptotic, olver_m_series, RegimePolicy};
use hyperfock::waves::{
    coulomb_partial_wave, coulomb_plane_wave, eigen_residual_coulomb, eigen_residual_hyperbolic,
    eigen_residual_repulsive, hyperbolic_partial_wave, hyperbolic_plane_wave, real_harmonic,
};
use hyperfock::{OdeSpec, PhasePoint, SpectralParams, SphereDirection, SphereRule};

/// Worst observed error against a tolerance, plus any failure messages.
struct Tally {
    worst: f64,
    tol: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new(tol: f64) -> Self {
        Self {
            worst: 0.0,
            tol,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, err: f64, what: impl FnOnce() -> String) {
        if err.is_nan() || err > self.tol {
            self.failures.push(format!("{} (error {err:.3e})", what()));
        }
        if !err.is_nan() {
            self.worst = self.worst.max(err);
        }
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn summary(&self, label: &str) -> String {
        format!("{label} max {:.2e} (tol {:.0e})", self.worst, self.tol)
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    failures: Vec<String>,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn params(d: usize, hbar: f64, lambda: f64) -> SpectralParams {
    SpectralParams::new(d, hbar, lambda).expect("valid parameters")
}

fn from_parts(parts: Vec<(&str, Tally)>, budget: Option<(Duration, Duration)>) -> Outcome {
    let mut pass = parts.iter().all(|(_, t)| t.ok());
    let mut detail: Vec<String> = parts.iter().map(|(l, t)| t.summary(l)).collect();
    let mut failures: Vec<String> = parts.into_iter().flat_map(|(_, t)| t.failures).collect();
    if let Some((used, limit)) = budget {
        detail.push(format!("{:.1}s of {:.0}s", used.as_secs_f64(), limit.as_secs_f64()));
        if used > limit {
            pass = false;
            failures.push("runtime budget exceeded".into());
        }
    }
    Outcome {
        pass,
        detail: detail.join("; "),
        failures,
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let spec = HankelSpec::default();
    let mut t = Tally::new(1e-5);
    for d in [2usize, 3] {
        for lam in [1.0, 2.0] {
            for l in 0..=4 {
                for rho in [0.25, 0.5, 0.75] {
                    let want = hyperbolic_partial_wave(lam, d, l, rho);
                    let got = fock_map_partial_wave(&params(d, 1.0, lam), l, rho, &spec);
                    match (got, want) {
                        (Ok(g), Ok(w)) => t.check(rel(g, w), || format!("d={d} lam={lam} l={l} rho={rho}")),
                        (g, w) => t.fail(format!("d={d} lam={lam} l={l} rho={rho}: {g:?} / {w:?}")),
                    }
                }
            }
        }
    }
    from_parts(vec![("rel", t)], Some((start.elapsed(), Duration::from_secs(300))))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = params(2, 1.0, 1.0);
    let th = SphereDirection::axis(2);
    let mut t = Tally::new(1e-3);
    for xi in [[2.0, 0.5], [0.4, 0.1], [-1.5, 1.0]] {
        let num = fourier_numeric_2d(&p, &xi, &th, None, 5);
        let want = fourier_closed_form(&p, &xi, &th);
        match (num, want) {
            (Ok(n), Ok(w)) => t.check(rel(n.value, w.value), || format!("xi={xi:?}")),
            (n, w) => t.fail(format!("xi={xi:?}: {n:?} / {w:?}")),
        }
    }
    from_parts(vec![("rel", t)], Some((start.elapsed(), Duration::from_secs(600))))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sym = Tally::new(1e-12);
    let mut branch = Tally::new(1e-12);
    for d in [2usize, 3] {
        for lam in [1.0, 2.0, -1.0] {
            let p = params(d, 1.0, lam);
            let th = SphereDirection::axis(d);
            for _ in 0..50 {
                let r: f64 = rng.gen_range(0.05..0.95);
                let dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
                let xi: Vec<f64> = dir.iter().map(|c| r * c / n).collect();
                match inversion_symmetry_check(&p, &xi, &th) {
                    Ok(c) => sym.check(c.deviation, || format!("d={d} lam={lam} xi={xi:?}")),
                    Err(e) => sym.fail(format!("d={d} lam={lam} xi={xi:?}: {e}")),
                }
            }
            let f = interior_branch_factor(lam);
            let want = Complex64::new(-(-PI * lam.abs()).exp(), 0.0);
            branch.check((f - want).norm() / want.norm(), || format!("branch factor lam={lam}"));
        }
    }
    from_parts(vec![("inversion", sym), ("branch", branch)], None)
}

fn criterion_4() -> Outcome {
    let rule = FunkHeckeRule::default();
    let mut fh = Tally::new(1e-6);
    let mut unit = Tally::new(1e-12);
    let mut pair = Tally::new(1e-12);
    for d in [2usize, 3] {
        for lam in [0.5, 1.0, 2.0] {
            for l in 0..=6 {
                let (s, sm) = match (s_eigenvalue(lam, d, l), s_eigenvalue(-lam, d, l)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (a, b) => {
                        fh.fail(format!("d={d} lam={lam} l={l}: {a:?} / {b:?}"));
                        continue;
                    }
                };
                unit.check((s.norm() - 1.0).abs(), || format!("|s| d={d} lam={lam} l={l}"));
                pair.check((s * sm - 1.0).norm(), || format!("s(lam)s(-lam) d={d} lam={lam} l={l}"));
                match funk_hecke_eigenvalue(lam, d, l, &rule) {
                    Ok(q) => fh.check((q - s).norm(), || format!("d={d} lam={lam} l={l}")),
                    Err(e) => fh.fail(format!("d={d} lam={lam} l={l}: {e}")),
                }
            }
        }
    }
    from_parts(vec![("funk-hecke", fh), ("unitarity", unit), ("s(lam)s(-lam)", pair)], None)
}

fn project<F: Fn(&SphereDirection) -> Complex64>(rule: &SphereRule, l: usize, m: usize, kernel: F) -> Complex64 {
    rule.integrate(|t| kernel(&SphereDirection::new(t.to_vec()).expect("unit node")) * real_harmonic(l, m, t))
}

fn criterion_5() -> Outcome {
    let mut pw = Tally::new(1e-7);
    let mut app = Tally::new(1e-9);
    for d in [2usize, 3] {
        let rule = SphereRule::new(d, 96, 192).expect("rule");
        let (x, u): (Vec<f64>, Vec<f64>) = if d == 2 {
            (vec![1.2, -0.9], vec![0.3, 0.4])
        } else {
            (vec![0.4, 1.1, -0.7], vec![0.2, -0.3, 0.35])
        };
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let rho = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        let xhat: Vec<f64> = x.iter().map(|c| c / r).collect();
        let uhat: Vec<f64> = u.iter().map(|c| c / rho).collect();
        for lam in [1.0, 2.0] {
            let p = params(d, 1.0, lam);
            for l in 0..=4 {
                for m in [0usize, 1] {
                    let q = project(&rule, l, m, |t| coulomb_plane_wave(&p, &x, t).expect("in domain"));
                    let closed = coulomb_partial_wave(&p, l, r).expect("closed form") * real_harmonic(l, m, &xhat);
                    pw.check((q - closed).norm() / q.norm().max(1e-3), || {
                        format!("coulomb d={d} lam={lam} l={l} m={m}")
                    });
                    let q = project(&rule, l, m, |t| hyperbolic_plane_wave(lam, &u, t).expect("in domain"));
                    let closed =
                        hyperbolic_partial_wave(lam, d, l, rho).expect("closed form") * real_harmonic(l, m, &uhat);
                    pw.check((q - closed).norm() / q.norm().max(1e-3), || {
                        format!("hyperbolic d={d} lam={lam} l={l} m={m}")
                    });
                }
            }
        }
        for l in 0..=4 {
            for lam in [0.5, 1.0, 2.0] {
                for xi in [1.2, 2.0, 4.0] {
                    let paths = (
                        appendix_i_integral(lam, l, d, xi),
                        appendix_i_integral_cosh(lam, l, d, xi),
                        appendix_i_integral_conical(lam, l, d, xi),
                    );
                    match paths {
                        (Ok(a), Ok(b), Ok(c)) => {
                            let s = a.norm();
                            app.check(((a - b).norm() / s).max((a - c).norm() / s), || {
                                format!("I-integral d={d} l={l} lam={lam} xi={xi}")
                            });
                        }
                        other => app.fail(format!("I-integral d={d} l={l} lam={lam} xi={xi}: {other:?}")),
                    }
                }
            }
        }
    }
    from_parts(vec![("partial waves", pw), ("I-integral paths", app)], None)
}

fn grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|k| a + k as f64 * h).collect()
}

fn criterion_6() -> Outcome {
    let mut fine = Tally::new(1e-4);
    let mut order = Tally::new(0.5);
    type Residual = Box<dyn Fn(f64) -> Result<f64, hyperfock::WavesError>>;
    let cases: Vec<(String, Residual)> = vec![
        (
            "coulomb d=3 l=1 r in [1,5]".into(),
            Box::new(|h| eigen_residual_coulomb(&params(3, 1.0, 1.0), 1, &grid(1.0, 5.0, h))),
        ),
        (
            "coulomb d=2 l=2 lam=2 r in [1,5]".into(),
            Box::new(|h| eigen_residual_coulomb(&params(2, 1.0, 2.0), 2, &grid(1.0, 5.0, h))),
        ),
        (
            "repulsive d=2 l=0 r in [1,5]".into(),
            Box::new(|h| eigen_residual_repulsive(&params(2, 1.0, 1.0), 0, &grid(1.0, 5.0, h))),
        ),
        (
            "hyperbolic d=2 l=0 rho in [0.1,0.8]".into(),
            Box::new(|h| eigen_residual_hyperbolic(1.0, 2, 0, &grid(0.1, 0.8, h))),
        ),
        (
            "hyperbolic d=3 l=2 lam=2 rho in [0.1,0.8]".into(),
            Box::new(|h| eigen_residual_hyperbolic(2.0, 3, 2, &grid(0.1, 0.8, h))),
        ),
    ];
    for (name, f) in &cases {
        match (f(0.02), f(0.01), f(1e-3)) {
            (Ok(a), Ok(b), Ok(c)) => {
                order.check((a / b - 4.0).abs(), || format!("{name}: ratio {}", a / b));
                fine.check(c, || format!("{name} at h = 1e-3"));
            }
            other => fine.fail(format!("{name}: {other:?}")),
        }
    }
    from_parts(vec![("residual at h=1e-3", fine), ("|ratio - 4|", order)], None)
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / n).collect()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let spec = OdeSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut roundtrip = Tally::new(1e-12);
    for _ in 0..100 {
        let d = if rng.gen_bool(0.5) { 2 } else { 3 };
        let e: f64 = rng.gen_range(0.1..3.0);
        let p = PhasePoint::new(
            (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect(),
            (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect(),
        );
        match moser_map(e, &p).and_then(|q| moser_map_inverse(e, &q)) {
            Ok(b) => {
                let err = b
                    .x
                    .iter()
                    .zip(&p.x)
                    .chain(b.xi.iter().zip(&p.xi))
                    .map(|(a, c)| (a - c).abs() / (1.0 + c.abs()))
                    .fold(0.0, f64::max);
                roundtrip.check(err, || format!("roundtrip at {p:?}"));
            }
            Err(e) => roundtrip.fail(format!("roundtrip at {p:?}: {e}")),
        }
    }

    let mut pullback = Tally::new(1e-6);
    let mut pullback_order = Tally::new(0.5);
    let p = PhasePoint::new(vec![0.0, 1.0], vec![3f64.sqrt(), 0.0]);
    match symplectic_pullback_check(0.5, &p, 1e-4) {
        Ok(v) => pullback.check(v, || "pullback at h = 1e-4".into()),
        Err(e) => pullback.fail(format!("pullback: {e}")),
    }
    let q = PhasePoint::new(vec![0.4, 1.0], vec![1.2, -0.3]);
    match (symplectic_pullback_check(0.5, &q, 1e-2), symplectic_pullback_check(0.5, &q, 5e-3)) {
        (Ok(a), Ok(b)) => pullback_order.check((a / b - 4.0).abs(), || format!("pullback ratio {}", a / b)),
        other => pullback_order.fail(format!("pullback order: {other:?}")),
    }

    let mut shell = Tally::new(1e-10);
    for k in 0..100 {
        let d = if k % 2 == 0 { 2 } else { 3 };
        let e: f64 = rng.gen_range(0.2..2.0);
        let sign = if k % 4 < 2 { KeplerSign::Attractive } else { KeplerSign::Repulsive };
        let dir = unit((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let r = match sign {
            KeplerSign::Attractive => rng.gen_range(0.2..4.0),
            KeplerSign::Repulsive => rng.gen_range(1.2..4.0) / e,
        };
        let x: Vec<f64> = unit((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).iter().map(|c| r * c).collect();
        let pot = if sign == KeplerSign::Attractive { 1.0 / r } else { -1.0 / r };
        let k2 = 2.0 * (e + pot);
        let on = PhasePoint::new(x.clone(), dir.iter().map(|c| k2.sqrt() * c).collect());
        let off = PhasePoint::new(x, dir.iter().map(|c| 1.3 * k2.sqrt() * c).collect());
        let want_sheet = if sign == KeplerSign::Attractive { Sheet::Ball } else { Sheet::Exterior };
        match (moser_map(e, &on), moser_map(e, &off)) {
            (Ok(qa), Ok(qb)) => {
                shell.check((qa.covector_norm() - 1.0).abs(), || format!("on-shell |eta| at {on:?}"));
                if qa.sheet() != want_sheet {
                    shell.fail(format!("on-shell point on the wrong sheet: {on:?}"));
                }
                let h = hamiltonian(sign, &off).unwrap_or(f64::NAN);
                if (qb.covector_norm() - 1.0).abs() < 1e-6 && qb.sheet() == want_sheet {
                    shell.fail(format!("off-shell point (H = {h}) mapped to the unit cosphere"));
                }
            }
            other => shell.fail(format!("on-shell sample: {other:?}")),
        }
    }

    let mut drift = Tally::new(50.0 * spec.rel_tol);
    let mut identity = Tally::new(1e-9);
    let hyp = PhasePoint::new(vec![0.0, 1.0], vec![1.0, 1.0]);
    let circ = PhasePoint::new(vec![1.0, 0.0], vec![0.0, 1.0]);
    let tilted = PhasePoint::new(vec![1.5, 0.0, 0.2], vec![0.1, 0.7, 0.3]);
    for (name, p, t) in [("E=1 hyperbolic", &hyp, 20.0), ("circular", &circ, 20.0), ("bound d=3", &tilted, 20.0)] {
        match kepler_flow(KeplerSign::Attractive, p, t, &spec) {
            Ok(o) => {
                drift.check(o.invariant_drift(), || format!("{name} drift"));
                let worst = o.conserved.iter().map(|c| c.identity_defect()).fold(0.0, f64::max);
                identity.check(worst, || format!("{name} |R|^2 identity"));
            }
            Err(e) => drift.fail(format!("{name}: {e}")),
        }
    }
    if let Ok(c) = conserved_quantities(KeplerSign::Repulsive, &PhasePoint::new(vec![0.3, -1.1, 0.7], vec![0.9, 0.2, -0.4])) {
        identity.check(c.identity_defect(), || "repulsive identity".into());
    }

    let mut period = Tally::new(1e-6);
    match kepler_period(&circ, &spec) {
        Ok(t) => period.check((t - TAU).abs(), || format!("period {t}")),
        Err(e) => period.fail(format!("period: {e}")),
    }

    let mut corr = Tally::new(1e-6);
    let on_attr = PhasePoint::new(vec![0.0, 1.0], vec![3f64.sqrt(), 0.0]);
    match flow_correspondence_check(KeplerSign::Attractive, 0.5, &on_attr, 5.0, 50, &spec) {
        Ok(c) => corr.check(c.max_deviation(), || "attractive correspondence".into()),
        Err(e) => corr.fail(format!("attractive correspondence: {e}")),
    }
    let x = vec![0.4, 3.0, -0.5];
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    let k = (2.0 * (1.0 - 1.0 / r)).sqrt();
    let on_rep = PhasePoint::new(x, [0.6, -0.48, 0.64].iter().map(|c| c * k).collect());
    match flow_correspondence_check(KeplerSign::Repulsive, 1.0, &on_rep, 5.0, 50, &spec) {
        Ok(c) => corr.check(c.max_deviation(), || "repulsive correspondence".into()),
        Err(e) => corr.fail(format!("repulsive correspondence: {e}")),
    }

    let mut third = Tally::new(1e-8);
    match moser_map(0.5, &on_attr) {
        Ok(q) => match kepler_third_law_check(KeplerSign::Attractive, 2.0, &q, 5.0, 50, &spec) {
            Ok(v) => third.check(v, || "third law E=2".into()),
            Err(e) => third.fail(format!("third law: {e}")),
        },
        Err(e) => third.fail(format!("third law start: {e}")),
    }
    let q = HyperbolicCotangentPoint::new(vec![1.8, 0.3], unit(vec![0.3, 1.0])).expect("regular point");
    match kepler_third_law_check(KeplerSign::Repulsive, 2.0, &q, 5.0, 50, &spec) {
        Ok(v) => third.check(v, || "third law repulsive E=2".into()),
        Err(e) => third.fail(format!("third law repulsive: {e}")),
    }

    let mut out = from_parts(
        vec![
            ("roundtrip", roundtrip),
            ("pullback", pullback),
            ("pullback |ratio-4|", pullback_order),
            ("on-shell", shell),
            ("drift", drift),
            ("|R|^2 identity", identity),
            ("period", period),
            ("correspondence", corr),
            ("third law", third),
        ],
        Some((start.elapsed(), Duration::from_secs(120))),
    );
    out.detail = out.detail.replace("; ", "\n    ");
    out
}

fn criterion_8() -> Outcome {
    let spec = HankelSpec::default();
    let mut t = Tally::new(1e-4);
    // Diagnostic only: the same outputs against the hyperbolic wave at -lambda.
    let mut flipped = Tally::new(1e-4);
    for lam in [1.0, 2.0] {
        for l in 0..=2 {
            for rho in [0.25, 0.5, 0.75] {
                let want = hyperbolic_partial_wave(lam, 2, l, rho);
                let got = repulsive_map_partial_wave(&params(2, 1.0, lam), l, rho, &spec);
                match (&got, want) {
                    (Ok(g), Ok(w)) => t.check(rel(*g, w), || format!("lam={lam} l={l} rho={rho}")),
                    (g, w) => t.fail(format!("lam={lam} l={l} rho={rho}: {g:?} / {w:?}")),
                }
                if let (Ok(g), Ok(w)) = (got, hyperbolic_partial_wave(-lam, 2, l, rho)) {
                    flipped.check(rel(g, w), || format!("lam={lam} l={l} rho={rho}"));
                }
            }
        }
    }
    let mut out = from_parts(vec![("rel", t)], None);
    out.detail.push_str(&format!("; {}", flipped.summary("rel vs -lambda (diagnostic)")));
    out
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn criterion_9() -> Outcome {
    // Reference values from mpmath at 30+ digits.
    let mut gamma = Tally::new(1e-13);
    for (z, lg) in [
        (c(0.3, 2.7), c(-3.519_878_385_242_761_5, -0.324_307_209_106_458_8)),
        (c(-4.2, 1.1), c(-4.974_088_140_122_202, -13.052_279_497_849_197)),
        (c(30.0, -40.0), c(49.232_808_494_070_3, -143.834_795_822_664_83)),
    ] {
        gamma.check(rel(log_gamma(z).exp(), lg.exp()), || format!("Gamma({z})"));
    }
    let mut m = Tally::new(1e-12);
    let policy = RegimePolicy::default();
    for (a, b, z, want) in [
        (c(0.0, 1.0), c(0.5, 0.0), c(0.0, 10.0), c(-0.304_863_537_024_942_85, 0.165_108_780_138_445_61)),
        (c(1.5, -2.0), c(3.0, 0.0), c(0.0, -35.0), c(-3.674_802_733_862_335_6e-4, -1.633_810_478_115_479_3e-3)),
        (c(2.5, -1.0), c(5.0, 0.0), c(0.0, -44.0), c(2.175_299_837_127_067e-5, -1.925_500_594_578_102_6e-7)),
        (c(0.0, 1.0), c(0.5, 0.0), c(0.0, 60.0), c(0.101_538_625_717_389_57, 0.407_080_333_703_190_93)),
    ] {
        m.check(rel(olver_m(a, b, z, &policy).value, want), || format!("M({a}; {b}; {z})"));
    }
    let mut bessel = Tally::new(1e-12);
    for (nu, x, want) in [
        (0.0, 1.0, 0.765_197_686_557_966_55),
        (0.0, 30.0, -0.086_367_983_581_040_211),
        (3.0, 7.0, -0.167_555_587_995_334_24),
        (2.5, 100.0, 0.038_325_919_332_375_406),
        (20.0, 41.0, 0.047_132_096_899_609_583),
        (20.0, 300.0, -0.006_481_151_688_762_769),
    ] {
        bessel.check((bessel_j(nu, x) - want).abs(), || format!("J_{nu}({x})"));
    }
    let mut conical = Tally::new(1e-10);
    for (lam, mu, x, want) in [
        (0.0, 0.0, 3.0, 0.834_626_841_674_073_186),
        (1.0, 1.0, 5.0 / 3.0, 0.411_531_465_440_230_313),
        (8.0, 10.0, 50.0, 5.271_683_866_178_222_31e-12),
        (8.0, 0.0, 1.01, 0.704_339_568_228_126_124),
        (3.0, 2.5, 7.0, -5.048_605_461_215_161_8e-3),
    ] {
        match conical_legendre_p(lam, mu, x) {
            Ok(v) => conical.check((v - want).abs() / want.abs(), || format!("P(lam={lam}, mu={mu}, x={x})")),
            Err(e) => conical.fail(format!("P(lam={lam}, mu={mu}, x={x}): {e}")),
        }
    }
    let mut overlap = Tally::new(1e-9);
    let r = policy.series_radius;
    for d in [2usize, 3] {
        let b = c((d as f64 - 1.0) / 2.0, 0.0);
        for lam in [0.5, 1.0, 2.0, -1.0, -2.0] {
            for sgn in [1.0, -1.0] {
                let a = c(0.0, sgn * lam);
                let s = olver_m_series(a, b, c(0.0, r)).value;
                let p = olver_m_asymptotic(a, b, c(0.0, r), policy.asymptotic_terms).value;
                overlap.check(rel(p, s), || format!("plane-wave family d={d} lam={}", sgn * lam));
            }
        }
        for l in 0..=4 {
            let bb = c(d as f64 - 1.0 + 2.0 * l as f64, 0.0);
            for lam in [1.0, 2.0] {
                let a = c((d as f64 - 1.0) / 2.0 + l as f64, -lam);
                let s = olver_m_series(a, bb, c(0.0, -r)).value;
                let p = olver_m_asymptotic(a, bb, c(0.0, -r), policy.asymptotic_terms).value;
                overlap.check(rel(p, s), || format!("partial-wave family d={d} l={l} lam={lam}"));
            }
        }
    }
    from_parts(
        vec![
            ("Gamma", gamma),
            ("M", m),
            ("J", bessel),
            ("conical P", conical),
            ("M regime overlap", overlap),
        ],
        None,
    )
}

/// Criteria that fail with the published definitions, with the observed cause.
/// They are still reported as FAIL but do not fail the test run.
const KNOWN_FAILURES: [(usize, &str); 1] = [(
    8,
    "with the published repulsive plane wave, V^- lands on the hyperbolic partial wave at -lambda; \
     against the wave at +lambda each degree l is off by the unit factor s_0(lambda)/s_l(lambda)",
)];

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("partial-wave Fock map vs hyperbolic partial waves", criterion_1),
        ("direct 2-D Fourier transform vs closed form", criterion_2),
        ("inversion symmetry and interior branch factor", criterion_3),
        ("scattering eigenvalues, Funk-Hecke and unitarity", criterion_4),
        ("partial waves vs sphere quadrature, I-integral paths", criterion_5),
        ("eigen-equation residuals", criterion_6),
        ("Moser map and Kepler flow", criterion_7),
        ("repulsive Fock map vs hyperbolic partial waves", criterion_8),
        ("special-function floor", criterion_9),
    ];
    let mut failed = 0;
    let mut unexpected = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let known = KNOWN_FAILURES.iter().find(|(n, _)| *n == k + 1).map(|(_, why)| *why);
        let status = match (out.pass, known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => "FAIL",
        };
        println!(
            "criterion {}: {status} {name} [{:.1}s]\n    {}",
            k + 1,
            start.elapsed().as_secs_f64(),
            out.detail
        );
        for f in out.failures.iter().take(10) {
            println!("    failed: {f}");
        }
        if let (false, Some(why)) = (out.pass, known) {
            println!("    known: {why}");
        }
        if !out.pass {
            failed += 1;
            if known.is_none() {
                unexpected += 1;
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
