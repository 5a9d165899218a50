//! Adaptive Runge-Kutta integration with event detection.
//!
//! The integrator is the Dormand-Prince 5(4) embedded pair with the PI
//! step-size controller of Hairer, Norsett and Wanner. Events are scalar
//! functions of `(t, y)`; when one changes sign over an accepted step the
//! crossing is bracketed and bisected using fresh sub-steps from the start
//! of that step, so the reported state is a genuine fifth-order solution.
//!
//! [`integrate_scale_flow`] wraps the integrator for systems of positive
//! scale factors that may collapse in finite time. It integrates the
//! logarithms of the scales against a reparametrized time in which every
//! log-rate is bounded, so collapse thresholds far below the resolution of
//! `t` itself are still reached by a regular ODE.

use crate::error::{Error, Result};

/// Tolerances and step bounds for [`integrate_adaptive`] and friends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub initial_step: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            initial_step: 1e-4,
        }
    }
}

impl IntegratorOptions {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && !x.is_nan();
        if !(positive(self.rel_tol) && positive(self.abs_tol) && positive(self.max_step) && positive(self.initial_step))
        {
            return Err(Error::InvalidParameter(format!(
                "integrator options must be strictly positive: {self:?}"
            )));
        }
        if self.rel_tol > 1e-3 || self.abs_tol > 1e-3 {
            return Err(Error::InvalidParameter(format!(
                "tolerances must not exceed 1e-3: rel_tol={}, abs_tol={}",
                self.rel_tol, self.abs_tol
            )));
        }
        Ok(())
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    ReachedHorizon,
    Event {
        time: f64,
        label: String,
    },
    /// The step size fell below `1e-14 * (t_end - t0)`, which signals
    /// blow-up or stiffness.
    StepSizeUnderflow,
}

/// Samples of an integrated solution at the accepted steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has at least one sample")
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least one sample")
    }

    /// Values of state component `index` at every sample.
    pub fn component(&self, index: usize) -> Vec<f64> {
        self.states.iter().map(|y| y[index]).collect()
    }

    /// The event time, if the run was stopped by the event named `label`.
    pub fn event_time(&self, label: &str) -> Option<f64> {
        match &self.termination {
            Termination::Event { time, label: l } if l == label => Some(*time),
            _ => None,
        }
    }
}

/// A labelled scalar event function `g(t, y)`; the integration stops at the
/// first sign change of `g` along the solution.
pub struct Event<'a> {
    pub label: &'a str,
    pub function: &'a dyn Fn(f64, &[f64]) -> f64,
}

impl<'a> Event<'a> {
    pub fn new(label: &'a str, function: &'a dyn Fn(f64, &[f64]) -> f64) -> Self {
        Self { label, function }
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// PI controller constants.
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

const UNDERFLOW_FRACTION: f64 = 1e-14;

struct Stepper<'f, F> {
    field: &'f F,
    k: [Vec<f64>; 7],
    stage: Vec<f64>,
    y_new: Vec<f64>,
}

impl<'f, F> Stepper<'f, F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn new(field: &'f F, dim: usize) -> Self {
        Self {
            field,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            stage: vec![0.0; dim],
            y_new: vec![0.0; dim],
        }
    }

    fn stage_eval(&mut self, t: f64, y: &[f64], h: f64, coeffs: &[(usize, f64)], out: usize) -> bool {
        for (i, s) in self.stage.iter_mut().enumerate() {
            *s = y[i] + h * coeffs.iter().map(|&(j, a)| a * self.k[j][i]).sum::<f64>();
        }
        (self.field)(t, &self.stage, &mut self.k[out]);
        self.k[out].iter().all(|v| v.is_finite())
    }

    /// One trial step of size `h` from `(t, y)`; `k[0]` must hold `f(t, y)`.
    /// Returns the scaled error norm, or `None` when a stage was not finite.
    fn attempt(&mut self, t: f64, y: &[f64], h: f64, opts: &IntegratorOptions) -> Option<f64> {
        let ok = self.stage_eval(t + C2 * h, y, h, &[(0, A21)], 1)
            && self.stage_eval(t + C3 * h, y, h, &[(0, A31), (1, A32)], 2)
            && self.stage_eval(t + C4 * h, y, h, &[(0, A41), (1, A42), (2, A43)], 3)
            && self.stage_eval(t + C5 * h, y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)], 4)
            && self.stage_eval(t + h, y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], 5);
        if !ok {
            return None;
        }
        for i in 0..y.len() {
            self.y_new[i] = y[i]
                + h * (A71 * self.k[0][i]
                    + A73 * self.k[2][i]
                    + A74 * self.k[3][i]
                    + A75 * self.k[4][i]
                    + A76 * self.k[5][i]);
        }
        (self.field)(t + h, &self.y_new, &mut self.k[6]);
        if !self.k[6].iter().chain(self.y_new.iter()).all(|v| v.is_finite()) {
            return None;
        }
        let mut sum = 0.0;
        for i in 0..y.len() {
            let e = h
                * (E1 * self.k[0][i]
                    + E3 * self.k[2][i]
                    + E4 * self.k[3][i]
                    + E5 * self.k[4][i]
                    + E6 * self.k[5][i]
                    + E7 * self.k[6][i]);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(self.y_new[i].abs());
            sum += (e / scale).powi(2);
        }
        Some((sum / y.len() as f64).sqrt())
    }
}

/// Integrates `y' = field(t, y)` from `t0` to `t_end`.
///
/// The field writes the derivative into its third argument. Stages that
/// produce non-finite values are treated as rejected steps.
pub fn integrate_adaptive<F>(field: F, y0: &[f64], t0: f64, t_end: f64, opts: &IntegratorOptions) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    integrate_with_events(field, y0, t0, t_end, opts, &[])
}

/// Like [`integrate_adaptive`], stopping at the first zero of `event`.
pub fn integrate_with_event<F>(
    field: F,
    y0: &[f64],
    t0: f64,
    t_end: f64,
    opts: &IntegratorOptions,
    event: Event<'_>,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    integrate_with_events(field, y0, t0, t_end, opts, &[event])
}

/// Integrates with any number of terminal events; the earliest crossing wins.
pub fn integrate_with_events<F>(
    field: F,
    y0: &[f64],
    t0: f64,
    t_end: f64,
    opts: &IntegratorOptions,
    events: &[Event<'_>],
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    opts.validate()?;
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "integration interval [{t0}, {t_end}] is empty or not finite"
        )));
    }
    if y0.is_empty() || y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("initial state {y0:?} is not finite")));
    }
    let mut g_prev: Vec<f64> = events.iter().map(|e| (e.function)(t0, y0)).collect();
    if let Some((e, g)) = events.iter().zip(&g_prev).find(|(_, g)| **g == 0.0 || !g.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "event '{}' is {g} at the initial point",
            e.label
        )));
    }

    let dim = y0.len();
    let span = t_end - t0;
    let h_min = UNDERFLOW_FRACTION * span;
    let mut stepper = Stepper::new(&field, dim);
    (field)(t0, y0, &mut stepper.k[0]);
    if !stepper.k[0].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "vector field is not finite at the initial point t={t0}, y={y0:?}"
        )));
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut times = vec![t0];
    let mut states = vec![y0.to_vec()];
    let mut h = opts.initial_step.min(opts.max_step).min(span);
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;

    loop {
        let remaining = t_end - t;
        if remaining <= 0.0 {
            return Ok(Trajectory {
                times,
                states,
                termination: Termination::ReachedHorizon,
            });
        }
        let to_end = h >= remaining;
        let h_try = if to_end { remaining } else { h.min(opts.max_step) };
        if !to_end && (h_try < h_min || t + h_try == t) {
            return Ok(Trajectory {
                times,
                states,
                termination: Termination::StepSizeUnderflow,
            });
        }

        let Some(err) = stepper.attempt(t, &y, h_try, opts) else {
            h = 0.25 * h_try;
            last_rejected = true;
            continue;
        };

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            let t_new = if to_end { t_end } else { t + h_try };

            let mut first: Option<(usize, f64)> = None;
            for (idx, ev) in events.iter().enumerate() {
                let g = (ev.function)(t_new, &stepper.y_new);
                if g == 0.0 || g.signum() != g_prev[idx].signum() {
                    let t_star = locate_event(&mut stepper, opts, t, &y, h_try, ev, g_prev[idx], g);
                    if first.is_none_or(|(_, best)| t_star < best) {
                        first = Some((idx, t_star));
                    }
                }
                g_prev[idx] = g;
            }
            if let Some((idx, t_star)) = first {
                let h_star = t_star - t;
                let y_star = if h_star > 0.0 {
                    stepper.attempt(t, &y, h_star, opts);
                    stepper.y_new.clone()
                } else {
                    y.clone()
                };
                if t_star > t {
                    times.push(t_star);
                    states.push(y_star);
                } else {
                    *states.last_mut().expect("non-empty") = y_star;
                }
                return Ok(Trajectory {
                    times,
                    states,
                    termination: Termination::Event {
                        time: t_star,
                        label: events[idx].label.to_string(),
                    },
                });
            }

            t = t_new;
            y.copy_from_slice(&stepper.y_new);
            let (head, tail) = stepper.k.split_at_mut(6);
            head[0].copy_from_slice(&tail[0]);
            times.push(t);
            states.push(y.clone());

            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            fac_old = err.max(1e-4);
            let mut h_new = h_try / fac;
            if last_rejected {
                h_new = h_new.min(h_try);
            }
            last_rejected = false;
            h = h_new.min(opts.max_step);
        } else {
            h = h_try / (fac11 / SAFETY).min(1.0 / FAC_MIN);
            last_rejected = true;
        }
    }
}

/// Bisection with Illinois acceleration on `theta -> g(t + theta h, step(theta h))`.
/// The stepper's `k[0]` still holds `f(t, y)` when this runs.
#[allow(clippy::too_many_arguments)]
fn locate_event<F>(
    stepper: &mut Stepper<'_, F>,
    opts: &IntegratorOptions,
    t: f64,
    y: &[f64],
    h: f64,
    event: &Event<'_>,
    g_start: f64,
    g_end: f64,
) -> f64
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if g_end == 0.0 {
        return t + h;
    }
    let saved_k6 = stepper.k[6].clone();
    let saved_y_new = stepper.y_new.clone();

    let (mut lo, mut hi) = (0.0_f64, h);
    let (mut g_lo, mut g_hi) = (g_start, g_end);
    let mut side = 0i8;
    let resolution = 4.0 * f64::EPSILON * t.abs().max((t + h).abs()).max(f64::MIN_POSITIVE);
    let mut best = (hi, g_hi.abs());
    for iter in 0..200 {
        if hi - lo <= resolution {
            break;
        }
        // Illinois false-position step, falling back to bisection every third pass.
        let mut mid = if iter % 3 == 2 {
            0.5 * (lo + hi)
        } else {
            (lo * g_hi - hi * g_lo) / (g_hi - g_lo)
        };
        if !(mid > lo && mid < hi) {
            mid = 0.5 * (lo + hi);
        }
        let g_mid = match stepper.attempt(t, y, mid, opts) {
            Some(_) => (event.function)(t + mid, &stepper.y_new),
            None => f64::NAN,
        };
        if !g_mid.is_finite() {
            hi = mid;
            continue;
        }
        if g_mid.abs() < best.1 {
            best = (mid, g_mid.abs());
        }
        if g_mid == 0.0 {
            best = (mid, 0.0);
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
            if side == 1 {
                g_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = mid;
            g_hi = g_mid;
            if side == -1 {
                g_lo *= 0.5;
            }
            side = -1;
        }
    }
    stepper.k[6] = saved_k6;
    stepper.y_new = saved_y_new;
    t + best.0
}

/// Integrates positive scale factors `s_i` whose logarithmic rates
/// `d ln s_i / dt` are given by `log_rates(t, s, out)`.
///
/// The run stops at `t_end` (reported as [`Termination::ReachedHorizon`]) or
/// as soon as the smallest scale falls to `floor` (reported as an event
/// labelled `"extinction"`). Internally the state is `(ln s, t)` evolved in
/// a time `tau` with `dt/dtau = 1/(1 + sum |rate_i|)`, which keeps every
/// component's derivative bounded by one even while a scale collapses.
pub fn integrate_scale_flow<F>(
    log_rates: F,
    scales0: &[f64],
    t0: f64,
    t_end: f64,
    opts: &IntegratorOptions,
    floor: f64,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if !(floor > 0.0) || scales0.iter().any(|s| !(*s > floor) || !s.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "scale factors {scales0:?} must be finite and exceed the floor {floor}"
        )));
    }
    if !(t_end > t0) {
        return Err(Error::InvalidParameter(format!(
            "integration interval [{t0}, {t_end}] is empty"
        )));
    }
    let m = scales0.len();
    let field = |_tau: f64, z: &[f64], dz: &mut [f64]| {
        let scales: Vec<f64> = z[..m].iter().map(|v| v.exp()).collect();
        log_rates(z[m], &scales, &mut dz[..m]);
        let kappa = 1.0 + dz[..m].iter().map(|r| r.abs()).sum::<f64>();
        for r in &mut dz[..m] {
            *r /= kappa;
        }
        dz[m] = 1.0 / kappa;
    };
    let ln_floor = floor.ln();
    let extinction = move |_: f64, z: &[f64]| z[..m].iter().copied().fold(f64::INFINITY, f64::min) - ln_floor;
    let horizon = move |_: f64, z: &[f64]| z[m] - t_end;
    let events = [Event::new("extinction", &extinction), Event::new("horizon", &horizon)];

    let mut z: Vec<f64> = scales0.iter().map(|s| s.ln()).collect();
    z.push(t0);
    // Each unit of tau advances t by at most one, and advances it by one when
    // nothing is changing, so a chunk of this length normally finishes the run.
    let chunk = (t_end - t0) + scales0.iter().map(|s| s.ln().abs()).sum::<f64>() + m as f64 * ln_floor.abs() + 10.0;

    let mut times = vec![t0];
    let mut states = vec![scales0.to_vec()];
    let mut tau = 0.0;
    for _ in 0..1000 {
        let run = integrate_with_events(field, &z, tau, tau + chunk, opts, &events)?;
        for (zs, _) in run.states.iter().zip(&run.times).skip(1) {
            let t = zs[m];
            let scales: Vec<f64> = zs[..m].iter().map(|v| v.exp()).collect();
            if t > *times.last().expect("non-empty") {
                times.push(t);
                states.push(scales);
            } else {
                // t stalls below its resolution right before a collapse.
                *states.last_mut().expect("non-empty") = scales;
            }
        }
        match run.termination {
            Termination::Event { label, .. } if label == "horizon" => {
                *times.last_mut().expect("non-empty") = t_end;
                return Ok(Trajectory {
                    times,
                    states,
                    termination: Termination::ReachedHorizon,
                });
            }
            Termination::Event { label, .. } => {
                let time = *times.last().expect("non-empty");
                return Ok(Trajectory {
                    times,
                    states,
                    termination: Termination::Event { time, label },
                });
            }
            Termination::StepSizeUnderflow => {
                return Ok(Trajectory {
                    times,
                    states,
                    termination: Termination::StepSizeUnderflow,
                });
            }
            Termination::ReachedHorizon => {
                tau = run.final_time();
                z.copy_from_slice(run.final_state());
            }
        }
    }
    Err(Error::Integration(format!(
        "scale flow did not reach t_end={t_end} within 1000 reparametrized chunks"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> IntegratorOptions {
        IntegratorOptions::default()
    }

    #[test]
    fn constant_field_stays_constant() {
        let traj = integrate_adaptive(|_, _, dy| dy[0] = 0.0, &[1.0], 0.0, 1.0, &opts()).unwrap();
        assert_eq!(traj.termination, Termination::ReachedHorizon);
        assert_eq!(traj.final_time(), 1.0);
        assert!(traj.states.iter().all(|y| y[0] == 1.0));
    }

    #[test]
    fn exponential_growth() {
        let traj = integrate_adaptive(|_, y, dy| dy[0] = y[0], &[1.0], 0.0, 1.0, &opts()).unwrap();
        assert!((traj.final_state()[0] - std::f64::consts::E).abs() < 1e-8);
    }

    #[test]
    fn riccati_decay() {
        let traj = integrate_adaptive(|_, y, dy| dy[0] = -y[0] * y[0], &[1.0], 0.0, 10.0, &opts()).unwrap();
        assert!((traj.final_state()[0] - 1.0 / 11.0).abs() < 1e-8);
    }

    #[test]
    fn times_strictly_increase() {
        let traj = integrate_adaptive(
            |t, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0] + t.sin();
            },
            &[1.0, 0.0],
            0.0,
            20.0,
            &opts(),
        )
        .unwrap();
        assert_eq!(traj.times.len(), traj.states.len());
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn linear_event() {
        let g = |_: f64, y: &[f64]| y[0];
        let traj = integrate_with_event(
            |_, _, dy| dy[0] = -1.0,
            &[1.0],
            0.0,
            5.0,
            &opts(),
            Event::new("zero", &g),
        )
        .unwrap();
        let t_star = traj.event_time("zero").unwrap();
        assert!((t_star - 1.0).abs() < 1e-10);
        assert!(traj.final_state()[0].abs() <= 1e-10);
        assert_eq!(traj.final_time(), t_star);
    }

    #[test]
    fn exponential_event() {
        let target = (-2.0f64).exp();
        let g = move |_: f64, y: &[f64]| y[0] - target;
        let traj = integrate_with_event(
            |_, y, dy| dy[0] = -2.0 * y[0],
            &[1.0],
            0.0,
            5.0,
            &opts(),
            Event::new("level", &g),
        )
        .unwrap();
        let t_star = traj.event_time("level").unwrap();
        assert!((t_star - 1.0).abs() < 1e-8);
        assert!(g(t_star, traj.final_state()).abs() <= 1e-10);
    }

    #[test]
    fn squared_scale_factor_extinction() {
        // u = phi^2 for phi' = -4 - 2/phi (K = 1, n = 3, alpha = 1); u' = -8 sqrt(u) - 4
        // is regular through u = 0, so the sign change of u is the extinction.
        let g = |_: f64, y: &[f64]| y[0];
        let traj = integrate_with_event(
            |_, y, dy| dy[0] = -8.0 * y[0].max(0.0).sqrt() - 4.0,
            &[1.0],
            0.0,
            1.0,
            &opts(),
            Event::new("extinction", &g),
        )
        .unwrap();
        let expected = 0.25 + (1.0f64 / 3.0).ln() / 8.0;
        assert!((traj.event_time("extinction").unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn scale_flow_extinction_matches_closed_form() {
        let traj = integrate_scale_flow(
            |_, s, r| r[0] = (-4.0 - 2.0 / s[0]) / s[0],
            &[1.0],
            0.0,
            1.0,
            &opts(),
            1e-8,
        )
        .unwrap();
        let expected = 0.25 + (1.0f64 / 3.0).ln() / 8.0;
        let t_star = traj.event_time("extinction").unwrap();
        assert!((t_star - expected).abs() < 1e-10, "{t_star} vs {expected}");
        assert!((traj.final_state()[0] - 1e-8).abs() < 1e-12);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn scale_flow_reaches_horizon_exactly() {
        let traj = integrate_scale_flow(|_, _, r| r[0] = 0.5, &[1.0], 0.0, 3.0, &opts(), 1e-8).unwrap();
        assert_eq!(traj.termination, Termination::ReachedHorizon);
        assert_eq!(traj.final_time(), 3.0);
        assert!((traj.final_state()[0] - 1.5f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let f = |_: f64, _: &[f64], dy: &mut [f64]| dy[0] = 0.0;
        assert!(integrate_adaptive(f, &[1.0], 1.0, 0.0, &opts()).is_err());
        let loose = IntegratorOptions::with_tolerances(1e-2, 1e-12);
        assert!(integrate_adaptive(f, &[1.0], 0.0, 1.0, &loose).is_err());
        let g = |_: f64, y: &[f64]| y[0] - 1.0;
        assert!(integrate_with_event(f, &[1.0], 0.0, 1.0, &opts(), Event::new("x", &g)).is_err());
    }

    #[test]
    fn blow_up_reports_underflow() {
        // y' = y^2 from y(0) = 1 blows up at t = 1.
        let traj = integrate_adaptive(|_, y, dy| dy[0] = y[0] * y[0], &[1.0], 0.0, 2.0, &opts()).unwrap();
        assert_eq!(traj.termination, Termination::StepSizeUnderflow);
        assert!((traj.final_time() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tighter_tolerance_never_hurts() {
        type Case = (fn(f64, &[f64], &mut [f64]), f64, f64);
        let cases: [Case; 3] = [
            (|_, _, dy| dy[0] = 0.0, 1.0, 1.0),
            (|_, y, dy| dy[0] = y[0], 1.0, std::f64::consts::E),
            (|_, y, dy| dy[0] = -y[0] * y[0], 10.0, 1.0 / 11.0),
        ];
        for (field, t_end, exact) in cases {
            let mut previous = f64::INFINITY;
            let mut rel_tol = 1e-4;
            while rel_tol >= 1e-12 {
                let o = IntegratorOptions::with_tolerances(rel_tol, 1e-14);
                let traj = integrate_adaptive(field, &[1.0], 0.0, t_end, &o).unwrap();
                let err = (traj.final_state()[0] - exact).abs();
                assert!(err <= previous, "rel_tol {rel_tol}: {err} > {previous}");
                previous = err;
                rel_tol /= 2.0;
            }
        }
    }
}
