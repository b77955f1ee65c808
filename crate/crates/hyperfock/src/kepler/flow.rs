use std::cell::RefCell;
use std::f64::consts::SQRT_2;
use std::rc::Rc;
use std::io::Write;

use super::{dot, norm2, KeplerError};
use crate::numerics::quadrature::legendre_rule;
use crate::numerics::{
    ode_integrate, ode_integrate_at, Event, EventFlag, EventOutcome, OdeSpec, PhasePoint, Trajectory,
};

/// Radius of the neighbourhood of the origin inside which radial orbits are
/// carried through the collision in regularized variables.
const COLLISION_NEIGHBORHOOD: f64 = 1e-2;

/// Sign of the Coulomb potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeplerSign {
    /// H+ = |xi|^2/2 - 1/|x|.
    Attractive,
    /// H- = |xi|^2/2 + 1/|x|.
    Repulsive,
}

impl KeplerSign {
    /// Coefficient of 1/|x| in the Hamiltonian.
    fn coupling(self) -> f64 {
        match self {
            KeplerSign::Attractive => -1.0,
            KeplerSign::Repulsive => 1.0,
        }
    }
}

pub fn hamiltonian(sign: KeplerSign, p: &PhasePoint) -> Result<f64, KeplerError> {
    let r = norm2(&p.x).sqrt();
    if r == 0.0 {
        return Err(KeplerError::Singular("the Hamiltonian is singular at x = 0".into()));
    }
    Ok(0.5 * norm2(&p.xi) + sign.coupling() / r)
}

/// Energy, angular momentum L_ij = x_i xi_j - x_j xi_i (i < j) and the
/// Runge-Lenz vector R = (|xi|^2 -+ 1/|x|) x - (x.xi) xi.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedSet {
    pub energy: f64,
    pub angular_momentum: Vec<f64>,
    pub runge_lenz: Vec<f64>,
}

impl ConservedSet {
    pub fn angular_momentum_norm(&self) -> f64 {
        norm2(&self.angular_momentum).sqrt()
    }

    pub fn runge_lenz_norm(&self) -> f64 {
        norm2(&self.runge_lenz).sqrt()
    }

    /// | |R|^2 - 1 - 2 E |L|^2 |.
    pub fn identity_defect(&self) -> f64 {
        (norm2(&self.runge_lenz) - 1.0 - 2.0 * self.energy * norm2(&self.angular_momentum)).abs()
    }

    /// Largest componentwise difference to `other`.
    pub fn deviation(&self, other: &ConservedSet) -> f64 {
        let mut m = (self.energy - other.energy).abs();
        for (a, b) in self.angular_momentum.iter().zip(&other.angular_momentum) {
            m = m.max((a - b).abs());
        }
        for (a, b) in self.runge_lenz.iter().zip(&other.runge_lenz) {
            m = m.max((a - b).abs());
        }
        m
    }
}

fn wedge(a: &[f64], b: &[f64]) -> Vec<f64> {
    let d = a.len();
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            out.push(a[i] * b[j] - a[j] * b[i]);
        }
    }
    out
}

pub fn conserved_quantities(sign: KeplerSign, p: &PhasePoint) -> Result<ConservedSet, KeplerError> {
    let energy = hamiltonian(sign, p)?;
    let r = norm2(&p.x).sqrt();
    let k2 = norm2(&p.xi);
    let xx = dot(&p.x, &p.xi);
    let c = k2 + sign.coupling() / r;
    let runge_lenz = p.x.iter().zip(&p.xi).map(|(x, k)| c * x - xx * k).collect();
    Ok(ConservedSet {
        energy,
        angular_momentum: wedge(&p.x, &p.xi),
        runge_lenz,
    })
}

/// A Kepler trajectory with the conserved quantities at every sample.
#[derive(Debug, Clone)]
pub struct KeplerOrbit {
    pub sign: KeplerSign,
    pub trajectory: Trajectory<PhasePoint>,
    pub conserved: Vec<ConservedSet>,
}

impl KeplerOrbit {
    fn new(sign: KeplerSign, trajectory: Trajectory<PhasePoint>) -> Result<Self, KeplerError> {
        let conserved = trajectory
            .states
            .iter()
            .map(|s| conserved_quantities(sign, s))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            sign,
            trajectory,
            conserved,
        })
    }

    /// max_k |E_k - E_0|.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.conserved[0].energy;
        self.conserved.iter().map(|c| (c.energy - e0).abs()).fold(0.0, f64::max)
    }

    /// Largest deviation of E, L or R from the initial values.
    pub fn invariant_drift(&self) -> f64 {
        let c0 = &self.conserved[0];
        self.conserved.iter().map(|c| c.deviation(c0)).fold(0.0, f64::max)
    }

    pub fn collisions(&self) -> usize {
        self.trajectory
            .event_flags
            .iter()
            .filter(|&&f| f == EventFlag::CollisionReflection)
            .count()
    }

    /// CSV with columns t, x_*, xi_*, energy, |L|, |R|, event.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let d = self.trajectory.states.first().map_or(0, |s| s.dim());
        let mut header = vec!["t".to_string()];
        header.extend((0..d).map(|i| format!("x{i}")));
        header.extend((0..d).map(|i| format!("xi{i}")));
        header.extend(["energy", "l_norm", "r_norm", "event"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for (k, s) in self.trajectory.states.iter().enumerate() {
            let c = &self.conserved[k];
            let mut row = vec![format!("{:.17e}", self.trajectory.times[k])];
            row.extend(s.x.iter().chain(&s.xi).map(|v| format!("{v:.17e}")));
            row.push(format!("{:.17e}", c.energy));
            row.push(format!("{:.17e}", c.angular_momentum_norm()));
            row.push(format!("{:.17e}", c.runge_lenz_norm()));
            row.push(
                match self.trajectory.event_flags[k] {
                    EventFlag::None => "",
                    EventFlag::CollisionReflection => "collision",
                    EventFlag::Terminal => "terminal",
                }
                .to_string(),
            );
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn kepler_field(sign: KeplerSign) -> impl Fn(f64, &PhasePoint) -> PhasePoint {
    let g = sign.coupling();
    move |_t, s| {
        let r2 = norm2(&s.x);
        let r3 = r2 * r2.sqrt();
        PhasePoint {
            x: s.xi.clone(),
            xi: s.x.iter().map(|x| g * x / r3).collect(),
        }
    }
}

fn is_radial(p: &PhasePoint) -> bool {
    let scale = norm2(&p.x).sqrt() * norm2(&p.xi).sqrt();
    norm2(&wedge(&p.x, &p.xi)).sqrt() <= 1e-12 * scale.max(1.0)
}

/// Time to fall from radius w^2 to the origin on a radial orbit of energy
/// E. With r = w^2 and dt = r d tau the radial motion is w'' = E w / 2,
/// so dt = sqrt(2) w^2 dw / sqrt(E w^2 + 1), which is smooth at w = 0.
fn radial_fall_time(energy: f64, w: f64) -> f64 {
    let rule = legendre_rule(20);
    SQRT_2 * rule.integrate(0.0, w, |s| s * s / (energy * s * s + 1.0).sqrt())
}

/// Inverse of [`radial_fall_time`] in w on [0, w_max].
fn radial_radius_at(energy: f64, fall: f64, w_max: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, w_max);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if radial_fall_time(energy, mid) < fall {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    w * w
}

/// Carries an attractive radial orbit from the neighbourhood boundary
/// through the collision and back out along the same ray.
fn radial_transit(t: f64, s: &PhasePoint, t_end: f64) -> EventOutcome<PhasePoint> {
    let r = norm2(&s.x).sqrt();
    let n: Vec<f64> = s.x.iter().map(|x| x / r).collect();
    let energy = 0.5 * norm2(&s.xi) - 1.0 / r;
    let w0 = r.sqrt();
    let fall = radial_fall_time(energy, w0);
    if t + 2.0 * fall <= t_end {
        return EventOutcome {
            t: t + 2.0 * fall,
            state: PhasePoint {
                x: s.x.clone(),
                xi: s.xi.iter().map(|k| -k).collect(),
            },
            flag: EventFlag::CollisionReflection,
        };
    }
    let elapsed = (t_end - t).max(0.0);
    let (remaining, outward) = if elapsed <= fall {
        (fall - elapsed, false)
    } else {
        (elapsed - fall, true)
    };
    let rr = radial_radius_at(energy, remaining, w0);
    let speed = if rr > 0.0 { (2.0 * (energy + 1.0 / rr)).max(0.0).sqrt() } else { f64::INFINITY };
    let dir = if outward { 1.0 } else { -1.0 };
    EventOutcome {
        t: t_end,
        state: PhasePoint {
            x: n.iter().map(|c| rr * c).collect(),
            xi: n.iter().map(|c| dir * speed * c).collect(),
        },
        flag: if outward { EventFlag::CollisionReflection } else { EventFlag::None },
    }
}

/// Entry time, entry state and exit time of each regularized transit.
type TransitLog = Rc<RefCell<Vec<(f64, PhasePoint, f64)>>>;

/// Collision event for attractive orbits. Radial orbits are handed to the
/// regularized transit at |x| = max(threshold, 1e-2); any other orbit
/// reaching |x| = threshold is reflected in place, xi -> -xi.
fn collision_event(p0: &PhasePoint, spec: &OdeSpec, log: TransitLog) -> Event<'static, PhasePoint> {
    if is_radial(p0) {
        let radius = spec.event_threshold.max(COLLISION_NEIGHBORHOOD);
        Event::with_handler(
            move |_t, s: &PhasePoint| norm2(&s.x).sqrt() - radius,
            move |t, s: &PhasePoint, t_end| {
                let out = radial_transit(t, s, t_end);
                log.borrow_mut().push((t, s.clone(), out.t));
                out
            },
        )
    } else {
        let radius = spec.event_threshold;
        Event::with_handler(
            move |_t, s: &PhasePoint| norm2(&s.x).sqrt() - radius,
            |t, s: &PhasePoint, _end| EventOutcome {
                t,
                state: PhasePoint {
                    x: s.x.clone(),
                    xi: s.xi.iter().map(|k| -k).collect(),
                },
                flag: EventFlag::CollisionReflection,
            },
        )
    }
}

fn check_start(sign: KeplerSign, p0: &PhasePoint) -> Result<(), KeplerError> {
    if p0.dim() < 2 {
        return Err(KeplerError::InvalidArgument("dimension must be at least 2".into()));
    }
    hamiltonian(sign, p0).map(|_| ())
}

/// Integrates the Kepler flow of H+- over [0, t_max], recording every
/// accepted step. Attractive collision orbits are reflected back along the
/// line of approach.
pub fn kepler_flow(sign: KeplerSign, p0: &PhasePoint, t_max: f64, spec: &OdeSpec) -> Result<KeplerOrbit, KeplerError> {
    check_start(sign, p0)?;
    let field = kepler_field(sign);
    let traj = match sign {
        KeplerSign::Attractive => {
            let ev = collision_event(p0, spec, TransitLog::default());
            ode_integrate(field, p0, (0.0, t_max), spec, Some(&ev))?
        }
        KeplerSign::Repulsive => ode_integrate(field, p0, (0.0, t_max), spec, None)?,
    };
    KeplerOrbit::new(sign, traj)
}

/// As [`kepler_flow`], sampled at the given increasing times (t0 = 0).
pub fn kepler_flow_at(sign: KeplerSign, p0: &PhasePoint, times: &[f64], spec: &OdeSpec) -> Result<KeplerOrbit, KeplerError> {
    check_start(sign, p0)?;
    let field = kepler_field(sign);
    let traj = match sign {
        KeplerSign::Attractive => {
            let log = TransitLog::default();
            let ev = collision_event(p0, spec, log.clone());
            let mut traj = ode_integrate_at(field, p0, 0.0, times, spec, Some(&ev))?;
            // samples falling inside a transit are filled from its closed form
            for (t_in, s_in, t_out) in log.borrow().iter() {
                for k in 0..traj.len() {
                    let t = traj.times[k];
                    if t > *t_in && t < *t_out {
                        let o = radial_transit(*t_in, s_in, t);
                        traj.states[k] = o.state;
                        traj.event_flags[k] = o.flag;
                    }
                }
            }
            traj
        }
        KeplerSign::Repulsive => ode_integrate_at(field, p0, 0.0, times, spec, None)?,
    };
    KeplerOrbit::new(sign, traj)
}

/// Period of a bound, non-collision attractive orbit: the first return of
/// the position to the initial ray.
pub fn kepler_period(p0: &PhasePoint, spec: &OdeSpec) -> Result<f64, KeplerError> {
    check_start(KeplerSign::Attractive, p0)?;
    let c = conserved_quantities(KeplerSign::Attractive, p0)?;
    if !(c.energy < 0.0) {
        return Err(KeplerError::InvalidArgument("the orbit is not bound".into()));
    }
    if is_radial(p0) {
        return Err(KeplerError::InvalidArgument("radial orbits have no return to the ray".into()));
    }
    let a = -0.5 / c.energy;
    let bound = 1.5 * std::f64::consts::TAU * a.powf(1.5);
    let x0 = p0.x.clone();
    let l0 = c.angular_momentum.clone();
    // Sweep indicator: the projection of x0 ^ x onto L grows from zero, so
    // the event arms on the far side and fires on re-crossing the ray.
    let indicator = move |_t: f64, s: &PhasePoint| {
        if dot(&x0, &s.x) > 0.0 {
            -dot(&wedge(&x0, &s.x), &l0)
        } else {
            1.0
        }
    };
    let ev = Event::terminal(indicator);
    let traj = ode_integrate(kepler_field(KeplerSign::Attractive), p0, (0.0, bound), spec, Some(&ev))?;
    match traj.event_flags.last() {
        Some(EventFlag::Terminal) => Ok(*traj.times.last().expect("nonempty")),
        _ => Err(KeplerError::OutsideDomain("no return to the initial ray within 1.5 periods".into())),
    }
}

/// Circle through the momenta of an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFit {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Largest distance of a sample from the fitted circle, including the
    /// component normal to the orbital plane.
    pub max_residual: f64,
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *o = det(mk) / d;
    }
    Some(out)
}

/// Least-squares (Kasa) circle fit of the momenta in the plane spanned by
/// the initial position and momentum.
pub fn momentum_circle_fit(traj: &Trajectory<PhasePoint>) -> Result<CircleFit, KeplerError> {
    let first = traj
        .states
        .first()
        .ok_or_else(|| KeplerError::InvalidArgument("empty trajectory".into()))?;
    if traj.len() < 3 {
        return Err(KeplerError::InvalidArgument("need at least three samples".into()));
    }
    if is_radial(first) {
        return Err(KeplerError::Singular("collision orbits have no momentum circle".into()));
    }
    let rx = norm2(&first.x).sqrt();
    let e1: Vec<f64> = first.x.iter().map(|v| v / rx).collect();
    let proj = dot(&first.xi, &e1);
    let mut e2: Vec<f64> = first.xi.iter().zip(&e1).map(|(k, e)| k - proj * e).collect();
    let n2 = norm2(&e2).sqrt();
    e2.iter_mut().for_each(|v| *v /= n2);

    let pts: Vec<(f64, f64, f64)> = traj
        .states
        .iter()
        .map(|s| {
            let a = dot(&s.xi, &e1);
            let b = dot(&s.xi, &e2);
            let rest: Vec<f64> = (0..s.dim()).map(|i| s.xi[i] - a * e1[i] - b * e2[i]).collect();
            let off = norm2(&rest).sqrt();
            (a, b, off)
        })
        .collect();
    // a^2 + b^2 + D a + E b + F = 0
    let mut m = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for &(a, b, _) in &pts {
        let row = [a, b, 1.0];
        let z = -(a * a + b * b);
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * z;
        }
    }
    let [dd, ee, ff] = solve3(m, rhs).ok_or_else(|| KeplerError::Singular("momenta are collinear".into()))?;
    let (ca, cb) = (-dd / 2.0, -ee / 2.0);
    let radius = (ca * ca + cb * cb - ff).max(0.0).sqrt();
    let max_residual = pts
        .iter()
        .map(|&(a, b, off)| {
            let inplane = ((a - ca).hypot(b - cb) - radius).abs();
            inplane.hypot(off)
        })
        .fold(0.0, f64::max);
    let center = e1.iter().zip(&e2).map(|(u, v)| ca * u + cb * v).collect();
    Ok(CircleFit {
        center,
        radius,
        max_residual,
    })
}
