use hyperfock::fockmap::{fock_map_partial_wave, fourier_closed_form, fourier_regularized};
use hyperfock::numerics::{ode_integrate, richardson_extrapolate};
use hyperfock::specfun::log_gamma;
use hyperfock::waves::{coulomb_plane_wave, hyperbolic_partial_wave, poisson_quadrature, poisson_synthesize};
use hyperfock::{BoundaryData, HankelSpec, OdeSpec, PhasePoint, SpectralParams, SphereDirection, SphereRule, WaveKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> SphereDirection {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return SphereDirection::from_vector(&v).unwrap();
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, d: usize, r: f64) -> Vec<f64> {
    random_direction(rng, d).as_slice().iter().map(|c| c * r).collect()
}

#[test]
fn synthesis_matches_kernel_quadrature_for_random_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2usize, 3] {
        let rule = SphereRule::standard(d).unwrap();
        let params = SpectralParams::new(d, 1.0, 1.3).unwrap();
        let f = BoundaryData::from_fn(d, 4, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap();
        for kind in [WaveKind::Coulomb, WaveKind::Repulsive, WaveKind::Hyperbolic] {
            let points: Vec<Vec<f64>> = (0..5)
                .map(|_| {
                    let r = if kind == WaveKind::Hyperbolic { rng.gen_range(0.1..0.9) } else { rng.gen_range(0.2..4.0) };
                    random_point(&mut rng, d, r)
                })
                .collect();
            let field = poisson_synthesize(kind, &params, &f, &points).unwrap();
            for (x, &v) in points.iter().zip(&field.values) {
                let q = poisson_quadrature(kind, &params, &f, x, &rule).unwrap();
                assert!((v - q).norm() <= 1e-7 * q.norm(), "d={d} {kind:?} x={x:?}: {v} vs {q}");
            }
        }
    }
}

#[test]
fn regularized_family_converges_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [2usize, 3] {
        for _ in 0..20 {
            let lam = if rng.gen_bool(0.5) { 1.0 } else { -2.0 };
            let params = SpectralParams::new(d, 1.0, lam).unwrap();
            let theta = random_direction(&mut rng, d);
            // Keep away from the unit sphere and from theta0.
            let r = if rng.gen_bool(0.5) { rng.gen_range(0.2..0.8) } else { rng.gen_range(1.25..3.0) };
            let xi = random_point(&mut rng, d, r);
            let samples: Vec<(f64, Complex64)> = (0..6)
                .map(|j| {
                    let e = 0.05 / 2f64.powi(j);
                    (e, fourier_regularized(&params, &xi, &theta, e).unwrap())
                })
                .collect();
            let lim = richardson_extrapolate(&samples, 4, false).unwrap().value;
            let want = fourier_closed_form(&params, &xi, &theta).unwrap().value;
            assert!((lim - want).norm() <= 1e-6 * want.norm(), "d={d} xi={xi:?}: {lim} vs {want}");
        }
    }
}

#[test]
fn plane_wave_stays_within_its_asymptotic_envelope() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [2usize, 3] {
        for lam in [0.5, 1.0, 2.0] {
            let params = SpectralParams::new(d, 1.0, lam).unwrap();
            let b = params.half_dim();
            let theta = random_direction(&mut rng, d);
            let t1 = (-std::f64::consts::PI * lam / 2.0).exp() / log_gamma(Complex64::new(b, -lam)).exp().norm();
            let t2 = (-std::f64::consts::PI * lam / 2.0).exp() / log_gamma(Complex64::new(0.0, lam)).exp().norm();
            let mut worst: f64 = 0.0;
            for _ in 0..400 {
                let r = rng.gen_range(0.0..50.0);
                let x = random_point(&mut rng, d, r);
                let v = coulomb_plane_wave(&params, &x, &theta).unwrap();
                assert!(v.is_finite());
                let along: f64 = x.iter().zip(theta.as_slice()).map(|(a, b)| a * b).sum();
                let n = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                let w = params.wavenumber() * (n - along);
                let env = params.normalization() * (t1 + t2 * w.max(1.0).powf(-b));
                worst = worst.max(v.norm() / env);
            }
            assert!(worst <= 10.0, "d={d} lam={lam}: {worst}");
        }
    }
}

#[test]
fn partial_wave_pipelines_agree_at_random_radii() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = HankelSpec::default();
    for _ in 0..8 {
        let d = if rng.gen_bool(0.5) { 2 } else { 3 };
        let lam = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
        let l = rng.gen_range(0..=4);
        let rho = rng.gen_range(0.2..0.9);
        let got = fock_map_partial_wave(&SpectralParams::new(d, 1.0, lam).unwrap(), l, rho, &spec).unwrap();
        let want = hyperbolic_partial_wave(lam, d, l, rho).unwrap();
        assert!((got - want).norm() <= 1e-5 * want.norm(), "d={d} lam={lam} l={l} rho={rho}");
    }
}

#[test]
fn integrator_conserves_a_hamiltonian() {
    // Anharmonic oscillator H = |xi|^2/2 + |x|^4/4.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = OdeSpec::default();
    let h = |p: &PhasePoint| {
        let r2: f64 = p.x.iter().map(|c| c * c).sum();
        0.5 * p.xi.iter().map(|c| c * c).sum::<f64>() + 0.25 * r2 * r2
    };
    for _ in 0..5 {
        let p0 = PhasePoint::new(
            (0..2).map(|_| rng.gen_range(-1.5..1.5)).collect(),
            (0..2).map(|_| rng.gen_range(-1.5..1.5)).collect(),
        );
        let field = |_t: f64, p: &PhasePoint| {
            let r2: f64 = p.x.iter().map(|c| c * c).sum();
            PhasePoint::new(p.xi.clone(), p.x.iter().map(|c| -r2 * c).collect())
        };
        let traj = ode_integrate(field, &p0, (0.0, 20.0), &spec, None).unwrap();
        let e0 = h(&p0);
        let drift = traj.states.iter().map(|s| (h(s) - e0).abs() / e0).fold(0.0, f64::max);
        assert!(drift <= 50.0 * spec.rel_tol, "drift {drift:e}");
    }
}
