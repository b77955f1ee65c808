use super::NumericsError;

/// Classical phase-space state (x, xi).
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Self {
        assert_eq!(x.len(), xi.len(), "position and momentum dimensions differ");
        Self { x, xi }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// States the integrator can advance: anything with a flat real coordinate
/// representation.
pub trait OdeState: Clone {
    fn to_flat(&self) -> Vec<f64>;
    /// Rebuilds a state shaped like `self` from flat coordinates.
    fn from_flat(&self, flat: &[f64]) -> Self;
}

impl OdeState for Vec<f64> {
    fn to_flat(&self) -> Vec<f64> {
        self.clone()
    }
    fn from_flat(&self, flat: &[f64]) -> Self {
        flat.to_vec()
    }
}

impl OdeState for PhasePoint {
    fn to_flat(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.xi);
        v
    }
    fn from_flat(&self, flat: &[f64]) -> Self {
        let d = self.x.len();
        PhasePoint {
            x: flat[..d].to_vec(),
            xi: flat[d..].to_vec(),
        }
    }
}

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Collision-detection radius used by event indicators.
    pub event_threshold: f64,
}

impl Default for OdeSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.5,
            event_threshold: 1e-8,
        }
    }
}

impl OdeSpec {
    pub fn validate(&self) -> Result<(), NumericsError> {
        let in_unit = |v: f64| v > 0.0 && v < 1.0;
        if !in_unit(self.rel_tol) || !in_unit(self.abs_tol) {
            return Err(NumericsError::InvalidArgument("tolerances must lie in (0, 1)".into()));
        }
        if !(self.max_step > 0.0) || !(self.event_threshold > 0.0) {
            return Err(NumericsError::InvalidArgument(
                "max_step and event_threshold must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Per-sample marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventFlag {
    None,
    CollisionReflection,
    /// A terminal event stopped the integration at this sample.
    Terminal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S = PhasePoint> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub event_flags: Vec<EventFlag>,
}

impl<S> Trajectory<S> {
    fn push(&mut self, t: f64, s: S, flag: EventFlag) {
        self.times.push(t);
        self.states.push(s);
        self.event_flags.push(flag);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &S)> {
        self.times.last().map(|&t| (t, self.states.last().unwrap()))
    }
}

/// Result of an event handler: where integration resumes.
#[derive(Debug, Clone, PartialEq)]
pub struct EventOutcome<S> {
    pub t: f64,
    pub state: S,
    pub flag: EventFlag,
}

type Indicator<'a, S> = Box<dyn Fn(f64, &S) -> f64 + 'a>;
type Handler<'a, S> = Box<dyn Fn(f64, &S, f64) -> EventOutcome<S> + 'a>;

/// An event fires when `indicator` crosses from positive to non-positive.
///
/// A terminal event stops the integration. Otherwise `handler` receives the
/// located time, the state and the end of the integration window, and
/// returns the state to resume from (e.g. a collision reflection).
pub struct Event<'a, S> {
    pub indicator: Indicator<'a, S>,
    pub terminal: bool,
    pub handler: Option<Handler<'a, S>>,
}

impl<'a, S> Event<'a, S> {
    pub fn terminal(indicator: impl Fn(f64, &S) -> f64 + 'a) -> Self {
        Self {
            indicator: Box::new(indicator),
            terminal: true,
            handler: None,
        }
    }

    pub fn with_handler(
        indicator: impl Fn(f64, &S) -> f64 + 'a,
        handler: impl Fn(f64, &S, f64) -> EventOutcome<S> + 'a,
    ) -> Self {
        Self {
            indicator: Box::new(indicator),
            terminal: false,
            handler: Some(Box::new(handler)),
        }
    }

    /// Non-terminal event without a handler; firing is an error.
    pub fn unhandled(indicator: impl Fn(f64, &S) -> f64 + 'a) -> Self {
        Self {
            indicator: Box::new(indicator),
            terminal: false,
            handler: None,
        }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn rk_step<S, F>(field: &F, template: &S, t: f64, y: &[f64], h: f64) -> (Vec<f64>, Vec<f64>)
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    for stage in 0..7 {
        let mut ys = y.to_vec();
        for (j, kj) in k.iter().enumerate() {
            let a = A[stage][j];
            if a != 0.0 {
                for i in 0..n {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        let s = template.from_flat(&ys);
        k.push(field(t + C[stage] * h, &s).to_flat());
    }
    let mut y5 = y.to_vec();
    let mut err = vec![0.0; n];
    for i in 0..n {
        let mut s5 = 0.0;
        let mut s4 = 0.0;
        for j in 0..7 {
            s5 += B5[j] * k[j][i];
            s4 += B4[j] * k[j][i];
        }
        y5[i] += h * s5;
        err[i] = h * (s5 - s4);
    }
    (y5, err)
}

fn error_norm(y: &[f64], y_new: &[f64], err: &[f64], spec: &OdeSpec) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..y.len() {
        let scale = spec.abs_tol + spec.rel_tol * y[i].abs().max(y_new[i].abs());
        m = m.max(err[i].abs() / scale);
    }
    m
}

/// Integrates y' = field(t, y) over `t_span`, recording every accepted step.
pub fn ode_integrate<S, F>(
    field: F,
    y0: &S,
    t_span: (f64, f64),
    spec: &OdeSpec,
    event: Option<&Event<'_, S>>,
) -> Result<Trajectory<S>, NumericsError>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    if !(t_span.1 > t_span.0) {
        return Err(NumericsError::InvalidArgument("t1 must exceed t0".into()));
    }
    integrate_core(&field, y0, t_span.0, &[t_span.1], true, spec, event)
}

/// Integrates from `t0` and records the state exactly at each of `times`
/// (increasing, all >= t0), plus the initial state.
pub fn ode_integrate_at<S, F>(
    field: F,
    y0: &S,
    t0: f64,
    times: &[f64],
    spec: &OdeSpec,
    event: Option<&Event<'_, S>>,
) -> Result<Trajectory<S>, NumericsError>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    if times.iter().any(|&t| t < t0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(NumericsError::InvalidArgument(
            "output times must be increasing and not before t0".into(),
        ));
    }
    integrate_core(&field, y0, t0, times, false, spec, event)
}

fn integrate_core<S, F>(
    field: &F,
    y0: &S,
    t0: f64,
    stops: &[f64],
    record_all: bool,
    spec: &OdeSpec,
    event: Option<&Event<'_, S>>,
) -> Result<Trajectory<S>, NumericsError>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    spec.validate()?;
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        event_flags: Vec::new(),
    };
    traj.push(t0, y0.clone(), EventFlag::None);
    let t_end = match stops.last() {
        Some(&t) => t,
        None => return Ok(traj),
    };
    let mut t = t0;
    let mut y = y0.to_flat();
    let mut h = spec.max_step.min((t_end - t0).max(1e-12) / 100.0);
    let mut armed = event.map_or(false, |e| (e.indicator)(t, y0) > 0.0);
    let mut next_stop = 0;
    while next_stop < stops.len() && stops[next_stop] <= t {
        if !record_all && stops[next_stop] == t {
            // initial state already recorded
        }
        next_stop += 1;
    }

    while next_stop < stops.len() {
        let target = stops[next_stop];
        let mut step = h.min(spec.max_step);
        let hits_target = t + step >= target;
        if hits_target {
            step = target - t;
        }
        if step <= 1e-15 * t.abs().max(1.0) {
            if !record_all {
                traj.push(target, y0.from_flat(&y), EventFlag::None);
            }
            next_stop += 1;
            continue;
        }
        let (y_new, err) = rk_step(field, y0, t, &y, step);
        let en = error_norm(&y, &y_new, &err, spec);
        if !en.is_finite() || en > 1.0 {
            let factor = if en.is_finite() {
                (0.9 * en.powf(-0.2)).max(0.1)
            } else {
                0.1
            };
            h = step * factor;
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(NumericsError::StepUnderflow(t));
            }
            continue;
        }
        let t_new = if hits_target { target } else { t + step };
        let grow = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };

        if let Some(ev) = event {
            let s_new = y0.from_flat(&y_new);
            let ind_new = (ev.indicator)(t_new, &s_new);
            if armed && ind_new <= 0.0 {
                // Bisect on the step length, re-stepping from the step start.
                let (mut lo, mut hi) = (0.0, step);
                let mut y_hi = y_new.clone();
                for _ in 0..200 {
                    if hi - lo <= 1e-15 * (t.abs() + step).max(1e-300) {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    let (y_mid, _) = rk_step(field, y0, t, &y, mid);
                    if (ev.indicator)(t + mid, &y0.from_flat(&y_mid)) <= 0.0 {
                        hi = mid;
                        y_hi = y_mid;
                    } else {
                        lo = mid;
                    }
                }
                let t_ev = t + hi;
                let s_ev = y0.from_flat(&y_hi);
                if ev.terminal {
                    traj.push(t_ev, s_ev, EventFlag::Terminal);
                    return Ok(traj);
                }
                let handler = ev.handler.as_ref().ok_or(NumericsError::MissingReflection(t_ev))?;
                let out = handler(t_ev, &s_ev, t_end);
                if record_all {
                    traj.push(t_ev, s_ev, EventFlag::None);
                }
                // Stops passed over during the handled interval are filled
                // by the handler's own state only if they coincide with its end.
                t = out.t;
                y = out.state.to_flat();
                armed = (ev.indicator)(t, &out.state) > 0.0;
                if record_all {
                    traj.push(t, out.state, out.flag);
                } else {
                    while next_stop < stops.len() && stops[next_stop] <= t {
                        traj.push(stops[next_stop], y0.from_flat(&y), out.flag);
                        next_stop += 1;
                    }
                }
                if t >= t_end {
                    return Ok(traj);
                }
                h = step.max(1e-6);
                continue;
            }
            if ind_new > 0.0 {
                armed = true;
            }
        }

        t = t_new;
        y = y_new;
        h = step * grow;
        if record_all {
            traj.push(t, y0.from_flat(&y), EventFlag::None);
        }
        if hits_target {
            if !record_all {
                traj.push(t, y0.from_flat(&y), EventFlag::None);
            }
            next_stop += 1;
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn oscillator(_t: f64, p: &PhasePoint) -> PhasePoint {
        PhasePoint::new(p.xi.clone(), vec![-p.x[0]])
    }

    #[test]
    fn harmonic_oscillator_full_period() {
        let spec = OdeSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            ..OdeSpec::default()
        };
        let y0 = PhasePoint::new(vec![1.0], vec![0.0]);
        let traj = ode_integrate(oscillator, &y0, (0.0, 2.0 * PI), &spec, None).unwrap();
        let (t, y) = traj.last().unwrap();
        assert_eq!(t, 2.0 * PI);
        assert!((y.x[0] - 1.0).abs() < 1e-8 && y.xi[0].abs() < 1e-8);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(traj.times.len(), traj.states.len());
        // energy along samples
        for s in &traj.states {
            let e = 0.5 * (s.x[0] * s.x[0] + s.xi[0] * s.xi[0]);
            assert!((e - 0.5).abs() < 50.0 * spec.rel_tol);
        }
    }

    #[test]
    fn zero_field_is_constant() {
        let y0 = vec![1.0, -2.0, 3.0];
        let traj = ode_integrate(|_, y: &Vec<f64>| vec![0.0; y.len()], &y0, (0.0, 3.0), &OdeSpec::default(), None)
            .unwrap();
        assert!(traj.states.iter().all(|s| *s == y0));
    }

    #[test]
    fn sampling_at_requested_times() {
        let y0 = PhasePoint::new(vec![1.0], vec![0.0]);
        let times = [0.5, 1.0, 2.5];
        let traj = ode_integrate_at(oscillator, &y0, 0.0, &times, &OdeSpec::default(), None).unwrap();
        assert_eq!(traj.times, vec![0.0, 0.5, 1.0, 2.5]);
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert!((s.x[0] - t.cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn terminal_event_locates_crossing() {
        let y0 = PhasePoint::new(vec![1.0], vec![0.0]);
        let ev = Event::terminal(|_, p: &PhasePoint| p.x[0]);
        let traj = ode_integrate(oscillator, &y0, (0.0, 5.0), &OdeSpec::default(), Some(&ev)).unwrap();
        let (t, _) = traj.last().unwrap();
        assert!((t - PI / 2.0).abs() < 1e-9);
        assert_eq!(*traj.event_flags.last().unwrap(), EventFlag::Terminal);
    }

    #[test]
    fn missing_reflection_is_an_error() {
        let y0 = PhasePoint::new(vec![1.0], vec![0.0]);
        let ev = Event::unhandled(|_, p: &PhasePoint| p.x[0]);
        let r = ode_integrate(oscillator, &y0, (0.0, 5.0), &OdeSpec::default(), Some(&ev));
        assert!(matches!(r, Err(NumericsError::MissingReflection(_))));
    }

    #[test]
    fn reflection_handler_resumes() {
        // Free particle bouncing off a wall at x = 0.
        let y0 = PhasePoint::new(vec![1.0], vec![-1.0]);
        let ev = Event::with_handler(
            |_, p: &PhasePoint| p.x[0],
            |t, p: &PhasePoint, _| EventOutcome {
                t,
                state: PhasePoint::new(p.x.clone(), vec![-p.xi[0]]),
                flag: EventFlag::CollisionReflection,
            },
        );
        let free = |_t: f64, p: &PhasePoint| PhasePoint::new(p.xi.clone(), vec![0.0]);
        let traj = ode_integrate(free, &y0, (0.0, 3.0), &OdeSpec::default(), Some(&ev)).unwrap();
        let (_, last) = traj.last().unwrap();
        assert!((last.x[0] - 2.0).abs() < 1e-9);
        assert!(traj.event_flags.contains(&EventFlag::CollisionReflection));
    }

    #[test]
    fn rejects_bad_spec() {
        let spec = OdeSpec {
            rel_tol: 0.0,
            ..OdeSpec::default()
        };
        assert!(spec.validate().is_err());
    }
}
