use super::{dot, norm2, KeplerError};
use crate::numerics::{finite_difference_jacobian, PhasePoint};

/// Which sheet of the punctured two-sheeted hyperbolic space a point is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    /// 0 < |u| < 1.
    Ball,
    /// |u| > 1.
    Exterior,
}

/// (u, eta) in T*H~^d with eta the covector in the hyperbolic
/// identification; the canonically conjugate momentum is
/// p = 2 eta / |1 - |u|^2|.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicCotangentPoint {
    pub u: Vec<f64>,
    pub eta: Vec<f64>,
}

impl HyperbolicCotangentPoint {
    pub fn new(u: Vec<f64>, eta: Vec<f64>) -> Result<Self, KeplerError> {
        if u.len() != eta.len() {
            return Err(KeplerError::InvalidArgument("u and eta dimensions differ".into()));
        }
        let r2 = norm2(&u);
        if r2 == 0.0 || r2 == 1.0 {
            return Err(KeplerError::OutsideDomain("|u| must avoid 0 and 1".into()));
        }
        Ok(Self { u, eta })
    }

    /// From position and canonical momentum.
    pub fn from_canonical(u: Vec<f64>, p: &[f64]) -> Result<Self, KeplerError> {
        let s = (1.0 - norm2(&u)).abs() / 2.0;
        let eta = p.iter().map(|c| c * s).collect();
        Self::new(u, eta)
    }

    pub fn canonical_momentum(&self) -> Vec<f64> {
        let s = 2.0 / (1.0 - norm2(&self.u)).abs();
        self.eta.iter().map(|c| c * s).collect()
    }

    pub fn sheet(&self) -> Sheet {
        if norm2(&self.u) < 1.0 {
            Sheet::Ball
        } else {
            Sheet::Exterior
        }
    }

    /// Hyperbolic length of the covector, |eta|.
    pub fn covector_norm(&self) -> f64 {
        norm2(&self.eta).sqrt()
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }
}

fn p0_of(energy: f64) -> Result<f64, KeplerError> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(KeplerError::InvalidArgument(format!("the Moser map needs E > 0, got {energy}")));
    }
    Ok((2.0 * energy).sqrt())
}

/// M_E(x, xi) = (p0 xi/|xi|^2, (|p0^2 - |xi|^2|/(2|xi|^2)) (-x |xi|^2 + 2 xi (x.xi))),
/// p0 = sqrt(2E).
pub fn moser_map(energy: f64, p: &PhasePoint) -> Result<HyperbolicCotangentPoint, KeplerError> {
    let p0 = p0_of(energy)?;
    let k2 = norm2(&p.xi);
    if k2 == 0.0 || k2 == p0 * p0 {
        return Err(KeplerError::Singular("|xi| must avoid 0 and p0".into()));
    }
    let u = p.xi.iter().map(|c| p0 * c / k2).collect();
    let s = (p0 * p0 - k2).abs() / (2.0 * k2);
    let xx = dot(&p.x, &p.xi);
    let eta = p.x.iter().zip(&p.xi).map(|(x, k)| s * (-x * k2 + 2.0 * k * xx)).collect();
    HyperbolicCotangentPoint::new(u, eta)
}

/// M_E^{-1}(u, eta) = ((2/(p0^2 |1-|u|^2|)) (-eta |u|^2 + 2u (u.eta)), p0 u/|u|^2).
pub fn moser_map_inverse(energy: f64, q: &HyperbolicCotangentPoint) -> Result<PhasePoint, KeplerError> {
    let p0 = p0_of(energy)?;
    let r2 = norm2(&q.u);
    if r2 == 0.0 || r2 == 1.0 {
        return Err(KeplerError::Singular("|u| must avoid 0 and 1".into()));
    }
    let s = 2.0 / (p0 * p0 * (1.0 - r2).abs());
    let ue = dot(&q.u, &q.eta);
    let x = q.eta.iter().zip(&q.u).map(|(e, u)| s * (-e * r2 + 2.0 * u * ue)).collect();
    let xi = q.u.iter().map(|u| p0 * u / r2).collect();
    Ok(PhasePoint::new(x, xi))
}

/// max_{ij} |(J^T Omega J - factor Omega)_{ij}| for the central-difference
/// Jacobian J of `map` at `point`, Omega the canonical form on (q, p)
/// halves of the coordinates.
pub fn symplectic_defect<F>(map: F, point: &[f64], h: f64, factor: f64) -> Result<f64, KeplerError>
where
    F: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let n = point.len();
    if n % 2 != 0 {
        return Err(KeplerError::InvalidArgument("phase-space dimension must be even".into()));
    }
    let j = finite_difference_jacobian(map, point, h)?;
    if j.len() != n {
        return Err(KeplerError::InvalidArgument("map must preserve the dimension".into()));
    }
    let d = n / 2;
    let omega = |a: usize, b: usize| -> f64 {
        if a < d && b == a + d {
            1.0
        } else if a >= d && b + d == a {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            // (J^T Omega J)_{ab} = sum_{k<d} J_{k a} J_{k+d, b} - J_{k+d, a} J_{k b}
            let mut v = 0.0;
            for k in 0..d {
                v += j[k][a] * j[k + d][b] - j[k + d][a] * j[k][b];
            }
            worst = worst.max((v - factor * omega(a, b)).abs());
        }
    }
    Ok(worst)
}

/// Deviation of the Moser map, in the canonical coordinates (u, p), from
/// pulling du ^ dp back to p0 dx ^ dxi.
pub fn symplectic_pullback_check(energy: f64, p: &PhasePoint, h: f64) -> Result<f64, KeplerError> {
    let p0 = p0_of(energy)?;
    let d = p.dim();
    let map = |v: &[f64]| -> Option<Vec<f64>> {
        let pt = PhasePoint::new(v[..d].to_vec(), v[d..].to_vec());
        let q = moser_map(energy, &pt).ok()?;
        let mut out = q.u.clone();
        out.extend(q.canonical_momentum());
        Some(out)
    };
    let mut point = p.x.clone();
    point.extend_from_slice(&p.xi);
    symplectic_defect(map, &point, h, p0)
}
