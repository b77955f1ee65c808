use super::flow::kepler_flow_at;
use super::moser::{moser_map, moser_map_inverse, HyperbolicCotangentPoint, Sheet};
use super::{dot, norm2, KeplerError, KeplerSign};
use crate::numerics::{ode_integrate_at, Event, EventFlag, OdeSpec, PhasePoint};

/// Inversion u -> u/|u|^2 lifted to canonical momenta,
/// p -> |u|^2 (I - 2 u u^T/|u|^2) p. It is an involution and an isometry
/// exchanging the two sheets.
fn invert(u: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let r2 = norm2(u);
    let up = dot(u, p);
    let v = u.iter().map(|c| c / r2).collect();
    let q = p.iter().zip(u).map(|(pc, uc)| r2 * pc - 2.0 * uc * up).collect();
    (v, q)
}

/// Geodesic equations of K = (1 - |v|^2)^2 |p|^2 / 8 in the ball, with an
/// optional trailing clock coordinate advanced at `rate(v)`.
fn ball_field(d: usize, rate: impl Fn(f64) -> f64) -> impl Fn(f64, &Vec<f64>) -> Vec<f64> {
    move |_s, y| {
        let (v, p) = (&y[..d], &y[d..2 * d]);
        let r2 = norm2(v);
        let w = 1.0 - r2;
        let p2 = norm2(p);
        let mut out = Vec::with_capacity(y.len());
        out.extend(p.iter().map(|c| 0.25 * w * w * c));
        out.extend(v.iter().map(|c| 0.5 * w * p2 * c));
        if y.len() > 2 * d {
            out.push(rate(r2));
        }
        out
    }
}

fn to_ball(q: &HyperbolicCotangentPoint) -> (Vec<f64>, Vec<f64>) {
    let p = q.canonical_momentum();
    match q.sheet() {
        Sheet::Ball => (q.u.clone(), p),
        Sheet::Exterior => invert(&q.u, &p),
    }
}

fn from_ball(sheet: Sheet, v: &[f64], p: &[f64]) -> Result<HyperbolicCotangentPoint, KeplerError> {
    let (u, p) = match sheet {
        Sheet::Ball => (v.to_vec(), p.to_vec()),
        Sheet::Exterior => invert(v, p),
    };
    HyperbolicCotangentPoint::from_canonical(u, &p)
}

/// Solves the ball geodesic equations (plus optional clock) at the
/// increasing parameters `s`, failing if the boundary sphere is reached.
fn integrate_ball(
    y0: Vec<f64>,
    d: usize,
    s: &[f64],
    spec: &OdeSpec,
    rate: impl Fn(f64) -> f64,
) -> Result<Vec<Vec<f64>>, KeplerError> {
    let boundary = Event::terminal(move |_s, y: &Vec<f64>| 1.0 - norm2(&y[..d]));
    let traj = ode_integrate_at(ball_field(d, rate), &y0, 0.0, s, spec, Some(&boundary))?;
    if traj.event_flags.contains(&EventFlag::Terminal) {
        return Err(KeplerError::OutsideDomain("geodesic reached |u| = 1".into()));
    }
    Ok(traj.states)
}

/// Geodesic flow of the hyperbolic metric on the sheet of `q` for
/// parameter `s >= 0`. The exterior sheet is integrated through the
/// inversion, so geodesics pass through the puncture smoothly; only
/// landing exactly on |u| = 0 or 1 is an error.
pub fn geodesic_flow(q: &HyperbolicCotangentPoint, s: f64, spec: &OdeSpec) -> Result<HyperbolicCotangentPoint, KeplerError> {
    if !(s >= 0.0) {
        return Err(KeplerError::InvalidArgument("flow parameter must be non-negative".into()));
    }
    let d = q.dim();
    let (v, p) = to_ball(q);
    let mut y0 = v;
    y0.extend(p);
    let states = integrate_ball(y0, d, &[s], spec, |_| 0.0)?;
    let y = states.last().expect("nonempty");
    from_ball(q.sheet(), &y[..d], &y[d..2 * d])
}

/// Hyperbolic distance between two points of the same sheet.
pub fn hyperbolic_distance(a: &[f64], b: &[f64]) -> Result<f64, KeplerError> {
    let (ra, rb) = (norm2(a), norm2(b));
    if (ra < 1.0) != (rb < 1.0) || ra == 1.0 || rb == 1.0 {
        return Err(KeplerError::OutsideDomain("points lie on different sheets".into()));
    }
    let inv = |u: &[f64]| -> Vec<f64> {
        let r2 = norm2(u);
        u.iter().map(|c| c / r2).collect()
    };
    let (a, b) = if ra < 1.0 { (a.to_vec(), b.to_vec()) } else { (inv(a), inv(b)) };
    let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let arg = 1.0 + 2.0 * norm2(&diff) / ((1.0 - norm2(&a)) * (1.0 - norm2(&b)));
    Ok(arg.acosh())
}

/// Comparison of the Moser image of a Kepler orbit with the geodesic
/// through the image of its initial point.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    pub s: Vec<f64>,
    /// Kepler time t(s) along the geodesic.
    pub times: Vec<f64>,
    pub max_position_deviation: f64,
    pub max_covector_deviation: f64,
}

impl Correspondence {
    pub fn max_deviation(&self) -> f64 {
        self.max_position_deviation.max(self.max_covector_deviation)
    }
}

fn sample_grid(s_max: f64, samples: usize) -> Vec<f64> {
    (1..=samples).map(|j| s_max * j as f64 / samples as f64).collect()
}

/// Rate dt/ds = |x|/p0 = 2|u|^2 / (p0^3 |1 - |u|^2|), written in the ball
/// variable v (v = u on the ball, v = u/|u|^2 on the exterior sheet).
fn clock_rate(sheet: Sheet, p0: f64) -> impl Fn(f64) -> f64 {
    let c = 2.0 / p0.powi(3);
    move |r2| match sheet {
        Sheet::Ball => c * r2 / (1.0 - r2),
        Sheet::Exterior => c / (1.0 - r2),
    }
}

/// Flows an on-shell point by the Kepler flow of the given sign and the
/// geodesic flow of its Moser image for s in (0, s_max], matching them
/// through the time change dt/ds = |x|/p0, and reports the largest
/// deviation of M_E(Kepler) from the geodesic.
///
/// On the exterior sheet the image of the repulsive flow traverses the
/// cogeodesic flow backwards, so the geodesic is started from (u, -eta)
/// and its covector negated before comparing.
pub fn flow_correspondence_check(
    sign: KeplerSign,
    energy: f64,
    p: &PhasePoint,
    s_max: f64,
    samples: usize,
    spec: &OdeSpec,
) -> Result<Correspondence, KeplerError> {
    if samples == 0 || !(s_max > 0.0) {
        return Err(KeplerError::InvalidArgument("need s_max > 0 and at least one sample".into()));
    }
    let h = super::hamiltonian(sign, p)?;
    if (h - energy).abs() > 1e-10 * energy.abs().max(1.0) {
        return Err(KeplerError::InvalidArgument(format!("point is not on the shell H = {energy} (H = {h})")));
    }
    let p0 = (2.0 * energy).sqrt();
    let q0 = moser_map(energy, p)?;
    let sheet = q0.sheet();
    let expected = match sign {
        KeplerSign::Attractive => Sheet::Ball,
        KeplerSign::Repulsive => Sheet::Exterior,
    };
    if sheet != expected {
        return Err(KeplerError::OutsideDomain("Moser image on the wrong sheet".into()));
    }
    let d = p.dim();
    let s = sample_grid(s_max, samples);
    let orient = match sheet {
        Sheet::Ball => 1.0,
        Sheet::Exterior => -1.0,
    };
    let start = HyperbolicCotangentPoint::new(q0.u.clone(), q0.eta.iter().map(|e| orient * e).collect())?;
    let (v, pm) = to_ball(&start);
    let mut y0 = v;
    y0.extend(pm);
    y0.push(0.0);
    let geo = integrate_ball(y0, d, &s, spec, clock_rate(sheet, p0))?;
    let geo = &geo[1..];
    let times: Vec<f64> = geo.iter().map(|y| y[2 * d]).collect();
    let orbit = kepler_flow_at(sign, p, &times, spec)?;
    let mut dpos: f64 = 0.0;
    let mut dcov: f64 = 0.0;
    for (y, k) in geo.iter().zip(&orbit.trajectory.states[1..]) {
        let g = from_ball(sheet, &y[..d], &y[d..2 * d])?;
        let m = moser_map(energy, k)?;
        let du: Vec<f64> = g.u.iter().zip(&m.u).map(|(a, b)| a - b).collect();
        let de: Vec<f64> = g.eta.iter().zip(&m.eta).map(|(a, b)| orient * a - b).collect();
        dpos = dpos.max(norm2(&du).sqrt());
        dcov = dcov.max(norm2(&de).sqrt());
    }
    Ok(Correspondence {
        s,
        times,
        max_position_deviation: dpos,
        max_covector_deviation: dcov,
    })
}

/// Integrates Kepler's equations reparametrized by s, dt/ds = |x|/p0, and
/// returns t at the sample parameters.
fn kepler_clock(sign: KeplerSign, energy: f64, p: &PhasePoint, s: &[f64], spec: &OdeSpec) -> Result<Vec<f64>, KeplerError> {
    let p0 = (2.0 * energy).sqrt();
    let d = p.dim();
    let g = match sign {
        KeplerSign::Attractive => -1.0,
        KeplerSign::Repulsive => 1.0,
    };
    let field = move |_s: f64, y: &Vec<f64>| {
        let x = &y[..d];
        let r2 = norm2(x);
        let r = r2.sqrt();
        let rate = r / p0;
        let mut out = Vec::with_capacity(2 * d + 1);
        out.extend(y[d..2 * d].iter().map(|k| rate * k));
        out.extend(x.iter().map(|c| rate * g * c / (r2 * r)));
        out.push(rate);
        out
    };
    let mut y0 = p.x.clone();
    y0.extend_from_slice(&p.xi);
    y0.push(0.0);
    let traj = ode_integrate_at(field, &y0, 0.0, s, spec, None)?;
    Ok(traj.states[1..].iter().map(|y| y[2 * d]).collect())
}

/// Third-law scaling of the time change: starting from the preimages of
/// one cotangent point under M_E and M_{1/2}, the Kepler clocks satisfy
/// t_E(s) p0^3 = t_{1/2}(s). Returns the largest relative mismatch.
pub fn kepler_third_law_check(
    sign: KeplerSign,
    energy: f64,
    q: &HyperbolicCotangentPoint,
    s_max: f64,
    samples: usize,
    spec: &OdeSpec,
) -> Result<f64, KeplerError> {
    if samples == 0 || !(s_max > 0.0) {
        return Err(KeplerError::InvalidArgument("need s_max > 0 and at least one sample".into()));
    }
    let s = sample_grid(s_max, samples);
    let p0 = (2.0 * energy).sqrt();
    let te = kepler_clock(sign, energy, &moser_map_inverse(energy, q)?, &s, spec)?;
    let th = kepler_clock(sign, 0.5, &moser_map_inverse(0.5, q)?, &s, spec)?;
    Ok(te
        .iter()
        .zip(&th)
        .map(|(a, b)| (a * p0.powi(3) - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max))
}
