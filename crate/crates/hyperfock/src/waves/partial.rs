use std::f64::consts::PI;

use num_complex::Complex64;

use super::{sphere_area, SpectralParams, WaveKind, WavesError};
use crate::specfun::{conical_legendre_p, olver_m_checked, pochhammer, RegimePolicy};

fn check_radius(r: f64) -> Result<(), WavesError> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(WavesError::OutsideDomain(format!("radius must be >= 0, got {r}")));
    }
    Ok(())
}

fn coulomb_like(params: &SpectralParams, l: usize, r: f64, sign: f64) -> Result<Complex64, WavesError> {
    check_radius(r)?;
    let b = params.half_dim();
    let k = params.wavenumber();
    let a = Complex64::new(b, -sign * params.lambda);
    let lf = l as f64;
    let pref = params.normalization() * 2f64.powi(params.d as i32 - 1) * PI.powf(b) * pochhammer(a, l);
    let z = Complex64::new(0.0, 2.0 * k * r);
    let m = olver_m_checked(a + lf, Complex64::new(2.0 * b + 2.0 * lf, 0.0), -z, &RegimePolicy::default())?;
    Ok(pref * z.powu(l as u32) * Complex64::new(0.0, k * r).exp() * m)
}

/// Radial factor of the Coulomb Poisson operator applied to a degree-l
/// harmonic:
///
/// c 2^{d-1} pi^{(d-1)/2} Gamma((d-1)/2+l-i lambda)/Gamma((d-1)/2-i lambda)
///   (2ikr)^l e^{ikr} **M**((d-1)/2+l-i lambda; d-1+2l; -2ikr),  k = 1/(hbar^2 lambda).
pub fn coulomb_partial_wave(params: &SpectralParams, l: usize, r: f64) -> Result<Complex64, WavesError> {
    coulomb_like(params, l, r, 1.0)
}

/// Repulsive analogue: lambda -> -lambda in the Gamma ratio and the first
/// slot of **M**, with the extra factor e^{-pi|lambda|} of the repulsive
/// plane wave.
pub fn repulsive_partial_wave(params: &SpectralParams, l: usize, r: f64) -> Result<Complex64, WavesError> {
    Ok((-PI * params.lambda.abs()).exp() * coulomb_like(params, l, r, -1.0)?)
}

/// Radial factor of the hyperbolic Poisson operator applied to a degree-l
/// harmonic, 0 <= rho < 1:
///
/// (2 pi)^{d/2} Gamma((d-1)/2-i lambda+l)/Gamma((d-1)/2-i lambda)
///   (2 rho/(1-rho^2))^{1-d/2} P^{-(d/2-1+l)}_{-1/2+i lambda}((1+rho^2)/(1-rho^2)).
///
/// At rho = 0 the limit is |S^{d-1}| for l = 0 and 0 otherwise.
pub fn hyperbolic_partial_wave(lambda: f64, d: usize, l: usize, rho: f64) -> Result<Complex64, WavesError> {
    if !(0.0..1.0).contains(&rho) {
        return Err(WavesError::OutsideDomain(format!("rho must lie in [0, 1), got {rho}")));
    }
    if d < 2 {
        return Err(WavesError::InvalidArgument(format!("dimension must be >= 2, got {d}")));
    }
    if rho == 0.0 {
        return Ok(Complex64::new(if l == 0 { sphere_area(d) } else { 0.0 }, 0.0));
    }
    let df = d as f64;
    let a = Complex64::new((df - 1.0) / 2.0, -lambda);
    let one_minus = (1.0 - rho) * (1.0 + rho);
    let x = (1.0 + rho * rho) / one_minus;
    let mu = df / 2.0 - 1.0 + l as f64;
    let p = conical_legendre_p(lambda, mu, x)?;
    let geom = (2.0 * rho / one_minus).powf(1.0 - df / 2.0);
    Ok((2.0 * PI).powf(df / 2.0) * pochhammer(a, l) * geom * p)
}

/// Partial wave of the given kind at radius `radius` (|x| or rho).
pub fn partial_wave(kind: WaveKind, params: &SpectralParams, l: usize, radius: f64) -> Result<Complex64, WavesError> {
    match kind {
        WaveKind::Coulomb => coulomb_partial_wave(params, l, radius),
        WaveKind::Repulsive => repulsive_partial_wave(params, l, radius),
        WaveKind::Hyperbolic => hyperbolic_partial_wave(params.lambda, params.d, l, radius),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;
    use crate::waves::{coulomb_plane_wave, hyperbolic_plane_wave, real_harmonic, repulsive_plane_wave, SphereDirection, SphereRule};

    fn coulomb_origin_value(params: &SpectralParams) -> Complex64 {
        let d = params.d as f64;
        params.normalization() * 2f64.powf(d - 1.0) * PI.powf((d - 1.0) / 2.0) / gamma(Complex64::new(d - 1.0, 0.0))
    }

    fn p(d: usize, hbar: f64, lambda: f64) -> SpectralParams {
        SpectralParams::new(d, hbar, lambda).unwrap()
    }

    #[test]
    fn origin_values() {
        for d in [2, 3, 4] {
            let params = p(d, 1.0, 1.0);
            let v = coulomb_partial_wave(&params, 0, 0.0).unwrap();
            assert!((v - coulomb_origin_value(&params)).norm() < 1e-13);
            assert_eq!(coulomb_partial_wave(&params, 2, 0.0).unwrap(), Complex64::new(0.0, 0.0));
            let h = hyperbolic_partial_wave(1.0, d, 0, 0.0).unwrap();
            assert!((h.re - sphere_area(d)).abs() < 1e-13);
            // one-sided limit
            let near = hyperbolic_partial_wave(1.0, d, 0, 1e-4).unwrap();
            assert!((near - h).norm() < 1e-6 * h.norm());
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(hyperbolic_partial_wave(1.0, 2, 0, 1.0).is_err());
        assert!(coulomb_partial_wave(&p(2, 1.0, 1.0), 0, -1.0).is_err());
    }

    /// Project a plane-wave family onto the harmonic (l, m) by sphere quadrature.
    fn project<F: Fn(&[f64], &SphereDirection) -> Complex64>(d: usize, l: usize, m: usize, x: &[f64], kernel: F) -> Complex64 {
        let rule = SphereRule::new(d, 96, 192).unwrap();
        rule.integrate(|t| kernel(x, &SphereDirection::new(t.to_vec()).unwrap()) * real_harmonic(l, m, t))
    }

    #[test]
    fn coulomb_matches_sphere_quadrature() {
        for &(d, lam, hbar) in &[(2, 1.0, 1.0), (2, -1.0, 0.7), (3, 2.0, 1.0)] {
            let params = p(d, hbar, lam);
            for l in 0..=2 {
                let x: Vec<f64> = if d == 2 { vec![1.2, -0.9] } else { vec![0.4, 1.1, -0.7] };
                let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                let xhat: Vec<f64> = x.iter().map(|c| c / r).collect();
                let m = 0;
                let q = project(d, l, m, &x, |y, t| coulomb_plane_wave(&params, y, t).unwrap());
                let closed = coulomb_partial_wave(&params, l, r).unwrap() * real_harmonic(l, m, &xhat);
                assert!((q - closed).norm() <= 1e-9 * q.norm().max(1e-3), "d={d} l={l}: {q} vs {closed}");
            }
        }
    }

    #[test]
    fn repulsive_matches_sphere_quadrature() {
        for &(d, lam) in &[(2, 1.0), (3, 2.0), (2, -1.5)] {
            let params = p(d, 1.0, lam);
            for l in 0..=2 {
                let x: Vec<f64> = if d == 2 { vec![2.0, 0.5] } else { vec![0.4, 1.1, -0.7] };
                let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                let xhat: Vec<f64> = x.iter().map(|c| c / r).collect();
                let q = project(d, l, 0, &x, |y, t| repulsive_plane_wave(&params, y, t).unwrap());
                let closed = repulsive_partial_wave(&params, l, r).unwrap() * real_harmonic(l, 0, &xhat);
                assert!((q - closed).norm() <= 1e-9 * q.norm().max(1e-6), "d={d} l={l}: {q} vs {closed}");
            }
        }
    }

    #[test]
    fn hyperbolic_matches_sphere_quadrature() {
        for &(d, lam) in &[(2, 1.0), (3, 2.0), (2, -0.5)] {
            for l in 0..=3 {
                let u: Vec<f64> = if d == 2 { vec![0.3, 0.4] } else { vec![0.2, -0.3, 0.35] };
                let rho = u.iter().map(|c| c * c).sum::<f64>().sqrt();
                let uhat: Vec<f64> = u.iter().map(|c| c / rho).collect();
                let q = project(d, l, 0, &u, |y, t| hyperbolic_plane_wave(lam, y, t).unwrap());
                let closed = hyperbolic_partial_wave(lam, d, l, rho).unwrap() * real_harmonic(l, 0, &uhat);
                assert!((q - closed).norm() <= 1e-9 * q.norm().max(1e-6), "d={d} l={l}: {q} vs {closed}");
            }
        }
    }

    #[test]
    fn conjugation_in_lambda() {
        let a = hyperbolic_partial_wave(1.5, 3, 2, 0.6).unwrap();
        let b = hyperbolic_partial_wave(-1.5, 3, 2, 0.6).unwrap();
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
        let a = coulomb_partial_wave(&p(2, 1.0, 1.5), 1, 3.0).unwrap();
        let b = coulomb_partial_wave(&p(2, 1.0, -1.5), 1, 3.0).unwrap();
        assert!((a - b.conj()).norm() < 1e-13 * a.norm());
    }
}
