use num_complex::Complex64;

use super::{dot, hyperbolic_partial_wave, hyperbolic_plane_wave, partial_wave, SpectralParams, SphereDirection, WaveKind, WavesError};

/// Spacing of a uniform grid.
fn uniform_step(grid: &[f64]) -> Result<f64, WavesError> {
    if grid.len() < 2 {
        return Err(WavesError::InvalidArgument("grid needs at least two points".into()));
    }
    let h = grid[1] - grid[0];
    if !(h > 0.0) || grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) {
        return Err(WavesError::InvalidArgument("grid must be uniform and increasing".into()));
    }
    Ok(h)
}

/// max |(L - e) f| / max |f| over the grid, where L is the radial operator
/// a f'' + b f' + c f given pointwise by `coeffs(r) = (a, b, c)` and
/// derivatives are central differences with the grid spacing.
fn radial_residual<F, C>(grid: &[f64], f: F, coeffs: C, eigenvalue: f64) -> Result<f64, WavesError>
where
    F: Fn(f64) -> Result<Complex64, WavesError>,
    C: Fn(f64) -> (f64, f64, f64),
{
    let h = uniform_step(grid)?;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &r in grid {
        let (fm, f0, fp) = (f(r - h)?, f(r)?, f(r + h)?);
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        let d1 = (fp - fm) / (2.0 * h);
        let (a, b, c) = coeffs(r);
        worst = worst.max((d2 * a + d1 * b + f0 * c - f0 * eigenvalue).norm());
        scale = scale.max(f0.norm());
    }
    Ok(worst / scale)
}

fn coulomb_like_residual(kind: WaveKind, params: &SpectralParams, l: usize, r_grid: &[f64]) -> Result<f64, WavesError> {
    let h = uniform_step(r_grid)?;
    if r_grid[0] - h <= 0.0 {
        return Err(WavesError::OutsideDomain("stencil touches r = 0".into()));
    }
    let charge = if kind == WaveKind::Repulsive { -1.0 } else { 1.0 };
    let d = params.d as f64;
    let ang = (l as f64) * (l as f64 + d - 2.0);
    let hb2 = params.hbar * params.hbar;
    radial_residual(
        r_grid,
        |r| partial_wave(kind, params, l, r),
        |r| (-0.5 * hb2, -0.5 * hb2 * (d - 1.0) / r, 0.5 * hb2 * ang / (r * r) - charge / r),
        params.energy(),
    )
}

/// Relative residual of -hbar^2/2 (d_r^2 + (d-1)/r d_r - l(l+d-2)/r^2) - 1/r - E
/// applied to the Coulomb partial wave on a uniform grid, E = 1/(2 hbar^2 lambda^2).
pub fn eigen_residual_coulomb(params: &SpectralParams, l: usize, r_grid: &[f64]) -> Result<f64, WavesError> {
    coulomb_like_residual(WaveKind::Coulomb, params, l, r_grid)
}

/// Same as [`eigen_residual_coulomb`] with the repulsive potential +1/r and
/// the repulsive partial wave.
pub fn eigen_residual_repulsive(params: &SpectralParams, l: usize, r_grid: &[f64]) -> Result<f64, WavesError> {
    coulomb_like_residual(WaveKind::Repulsive, params, l, r_grid)
}

/// Relative residual of -Delta_H - (lambda^2 + (d-1)^2/4) applied to the
/// hyperbolic partial wave, with the ball-model radial operator
/// ((1-rho^2)^2/4)(d_rho^2 + (d-1)/rho d_rho - l(l+d-2)/rho^2) + ((d-2) rho (1-rho^2)/2) d_rho.
pub fn eigen_residual_hyperbolic(lambda: f64, d: usize, l: usize, rho_grid: &[f64]) -> Result<f64, WavesError> {
    let h = uniform_step(rho_grid)?;
    if rho_grid[0] - h <= 0.0 || rho_grid[rho_grid.len() - 1] + h >= 1.0 {
        return Err(WavesError::OutsideDomain("stencil leaves 0 < rho < 1".into()));
    }
    let df = d as f64;
    let ang = (l as f64) * (l as f64 + df - 2.0);
    let eig = lambda * lambda + (df - 1.0).powi(2) / 4.0;
    radial_residual(
        rho_grid,
        |rho| hyperbolic_partial_wave(lambda, d, l, rho),
        |rho| {
            let w = (1.0 - rho * rho).powi(2) / 4.0;
            let drift = (df - 2.0) * rho * (1.0 - rho * rho) / 2.0;
            (-w, -(w * (df - 1.0) / rho + drift), w * ang / (rho * rho))
        },
        eig,
    )
}

/// Relative residual of -Delta_H - (lambda^2 + (d-1)^2/4) applied to the
/// plane wave e_lambda(.; theta0) at the given points, with the Cartesian
/// ball-model Laplace-Beltrami operator
/// ((1-|u|^2)^2/4) Delta + ((d-2)(1-|u|^2)/2) u . grad, second-order stencil of step h.
pub fn hyperbolic_laplacian_residual(lambda: f64, theta0: &SphereDirection, points: &[Vec<f64>], h: f64) -> Result<f64, WavesError> {
    let d = theta0.dim();
    let df = d as f64;
    let eig = lambda * lambda + (df - 1.0).powi(2) / 4.0;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for u in points {
        let f0 = hyperbolic_plane_wave(lambda, u, theta0)?;
        let mut lap = Complex64::new(0.0, 0.0);
        let mut radial = Complex64::new(0.0, 0.0);
        let mut probe = u.clone();
        for i in 0..d {
            probe[i] = u[i] + h;
            let fp = hyperbolic_plane_wave(lambda, &probe, theta0)?;
            probe[i] = u[i] - h;
            let fm = hyperbolic_plane_wave(lambda, &probe, theta0)?;
            probe[i] = u[i];
            lap += (fp - 2.0 * f0 + fm) / (h * h);
            radial += (fp - fm) / (2.0 * h) * u[i];
        }
        let s = 1.0 - dot(u, u);
        let delta_h = lap * (s * s / 4.0) + radial * ((df - 2.0) * s / 2.0);
        worst = worst.max((-delta_h - f0 * eig).norm());
        scale = scale.max(f0.norm());
    }
    Ok(worst / scale)
}
