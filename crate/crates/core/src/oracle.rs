//! Independent forward simulation of the linearized trolley swing dynamics
//! and algebraic consistency checks for slew plans.
//!
//! The trolley oracle integrates the two coupled pendulum equations
//!
//! ```text
//! D_h α_h'' + (m_l/m_hl) D_l α_l'' + g α_h = -u
//! D_h α_h'' +            D_l α_l'' + g α_l = -u
//! ```
//!
//! with classical RK4, where `u` is the trolley acceleration.

use crate::error::{Error, Result};
use crate::model::{slew_states_from_flat, trolley_states_from_flat, CraneParams};
use crate::trajectory::{FlatTrajectory, SlewFlats};

/// Minimum number of RK4 steps per period of the fastest swing mode.
pub const STEPS_PER_PERIOD: f64 = 20.0;

/// Uniform samples of a scalar signal starting at `t = 0`. The signal is zero
/// after the last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub dt: f64,
    pub values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidInput(format!("sample spacing must be > 0, got {dt}")));
        }
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("signal must be non-empty and finite".into()));
        }
        Ok(Self { dt, values })
    }

    pub fn duration(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    /// Exact sample when `t` is on the grid, linear interpolation otherwise.
    pub fn value_at(&self, t: f64) -> f64 {
        let pos = t / self.dt;
        let k = pos.round();
        if (pos - k).abs() < 1e-6 {
            return if k < 0.0 { 0.0 } else { self.values.get(k as usize).copied().unwrap_or(0.0) };
        }
        let lo = pos.floor();
        if lo < 0.0 || lo as usize + 1 >= self.values.len() {
            return 0.0;
        }
        let i = lo as usize;
        self.values[i] + (self.values[i + 1] - self.values[i]) * (pos - lo)
    }
}

/// Swing angles and rates on the simulation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub dt: f64,
    pub hook: Vec<f64>,
    pub hook_rate: Vec<f64>,
    pub payload: Vec<f64>,
    pub payload_rate: Vec<f64>,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.hook.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hook.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    /// `[α_h, α_h', α_l, α_l']` at the last step.
    pub fn terminal(&self) -> [f64; 4] {
        let k = self.len() - 1;
        [self.hook[k], self.hook_rate[k], self.payload[k], self.payload_rate[k]]
    }
}

/// Angular frequencies (rad/s) of the two swing modes, slow first.
pub fn natural_frequencies(params: &CraneParams) -> [f64; 2] {
    let g = params.gravity;
    let det_m = params.hoist_length * params.rig_length * params.hook_mass / params.total_mass();
    let trace = g * params.total_length() / det_m;
    let det = g * g / det_m;
    let disc = (trace * trace - 4.0 * det).sqrt();
    [(0.5 * (trace - disc)).sqrt(), (0.5 * (trace + disc)).sqrt()]
}

/// Largest admissible step: [`STEPS_PER_PERIOD`] steps per fastest period.
pub fn max_step(params: &CraneParams) -> f64 {
    2.0 * std::f64::consts::PI / natural_frequencies(params)[1] / STEPS_PER_PERIOD
}

fn derivative(s: [f64; 4], u: f64, params: &CraneParams) -> [f64; 4] {
    let [ah, ahd, al, ald] = s;
    let g = params.gravity;
    let aldd = g * (ah - al) * params.total_mass() / (params.hook_mass * params.rig_length);
    let ahdd = (-u - g * al - params.rig_length * aldd) / params.hoist_length;
    [ahd, ahdd, ald, aldd]
}

fn axpy(s: [f64; 4], h: f64, k: [f64; 4]) -> [f64; 4] {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2], s[3] + h * k[3]]
}

/// Integrates from rest over `[0, duration]` with step `dt`, driven by the
/// trolley acceleration `input(t)`.
pub fn integrate_trolley_swings(
    input: &dyn Fn(f64) -> f64,
    params: &CraneParams,
    dt: f64,
    duration: f64,
) -> Result<SimTrace> {
    params.validate()?;
    let max_dt = max_step(params);
    if !(dt.is_finite() && dt > 0.0) || dt > max_dt {
        return Err(Error::StepSize { dt, max_dt });
    }
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(Error::InvalidTime(duration));
    }
    let steps = (duration / dt).round() as usize;
    let mut trace = SimTrace {
        dt,
        hook: Vec::with_capacity(steps + 1),
        hook_rate: Vec::with_capacity(steps + 1),
        payload: Vec::with_capacity(steps + 1),
        payload_rate: Vec::with_capacity(steps + 1),
    };
    let mut s = [0.0; 4];
    let mut push = |s: &[f64; 4]| {
        trace.hook.push(s[0]);
        trace.hook_rate.push(s[1]);
        trace.payload.push(s[2]);
        trace.payload_rate.push(s[3]);
    };
    push(&s);
    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = derivative(s, input(t), params);
        let k2 = derivative(axpy(s, 0.5 * dt, k1), input(t + 0.5 * dt), params);
        let k3 = derivative(axpy(s, 0.5 * dt, k2), input(t + 0.5 * dt), params);
        let k4 = derivative(axpy(s, dt, k3), input(t + dt), params);
        for i in 0..4 {
            s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        push(&s);
    }
    Ok(trace)
}

/// Integrates a sampled input over its own duration.
pub fn integrate_sampled(input: &SampledSignal, params: &CraneParams, dt: f64) -> Result<SimTrace> {
    integrate_trolley_swings(&|t| input.value_at(t), params, dt, input.duration())
}

/// Swing energy `½ q'ᵀ M q' + ½ qᵀ K q` with `q = (α_h, α_l)`.
pub fn swing_energy(state: [f64; 4], params: &CraneParams) -> f64 {
    let [ah, ahd, al, ald] = state;
    let (mhl, ml) = (params.total_mass(), params.payload_mass);
    let (dh, dl, g) = (params.hoist_length, params.rig_length, params.gravity);
    let kinetic = 0.5 * (mhl * dh * dh * ahd * ahd + 2.0 * ml * dh * dl * ahd * ald + ml * dl * dl * ald * ald);
    let potential = 0.5 * (mhl * g * dh * ah * ah + ml * g * dl * al * al);
    kinetic + potential
}

/// Deviation between the flat swing formulas and the simulated swings of a
/// planned trolley move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatSimComparison {
    pub max_hook_deviation: f64,
    pub max_payload_deviation: f64,
    /// Simulated `[α_h, α_h', α_l, α_l']` at the end of the move.
    pub terminal: [f64; 4],
}

impl FlatSimComparison {
    pub fn max_deviation(&self) -> f64 {
        self.max_hook_deviation.max(self.max_payload_deviation)
    }

    pub fn max_terminal(&self) -> f64 {
        self.terminal.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Simulates a planned trolley move driven by its own flat-map trolley
/// acceleration and compares against the flat swing formulas on every step.
pub fn compare_trolley_plan(dl: &FlatTrajectory, params: &CraneParams, dt: f64) -> Result<FlatSimComparison> {
    let t_op = dl.duration();
    let state = |t: f64| trolley_states_from_flat(&dl.eval_unchecked((t / t_op).clamp(0.0, 1.0), 6), params);
    let input = |t: f64| state(t).map(|s| s.acceleration).unwrap_or(f64::NAN);
    let trace = integrate_trolley_swings(&input, params, dt, t_op)?;
    let mut cmp = FlatSimComparison { max_hook_deviation: 0.0, max_payload_deviation: 0.0, terminal: trace.terminal() };
    for k in 0..trace.len() {
        let s = state(trace.time(k))?;
        cmp.max_hook_deviation = cmp.max_hook_deviation.max((s.hook_swing - trace.hook[k]).abs());
        cmp.max_payload_deviation = cmp.max_payload_deviation.max((s.payload_swing - trace.payload[k]).abs());
    }
    if !cmp.max_deviation().is_finite() {
        return Err(Error::InvalidInput("non-finite simulation result".into()));
    }
    Ok(cmp)
}

/// Projection residuals and swing peaks of a slew plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlewConsistency {
    /// `max |x_T - D_T cos θ_S|` (m).
    pub x_residual: f64,
    /// `max |y_T - D_T sin θ_S|` (m), with `y_T` from the trolley map applied
    /// to `y_l`.
    pub y_residual: f64,
    /// Peak `|α_h|, |β_h|, |α_l|, |β_l|` (rad).
    pub max_swings: [f64; 4],
}

pub fn slew_consistency_report(
    flats: &SlewFlats,
    jib_radius: f64,
    params: &CraneParams,
    n_samples: usize,
) -> Result<SlewConsistency> {
    if n_samples < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {n_samples}")));
    }
    let mut r = SlewConsistency { x_residual: 0.0, y_residual: 0.0, max_swings: [0.0; 4] };
    for i in 0..n_samples {
        let tau = i as f64 / (n_samples - 1) as f64;
        let xl = flats.xl.eval_unchecked(tau, 6);
        let yl = flats.yl.eval_unchecked(tau, 4);
        let s = slew_states_from_flat(
            &flats.xh.eval_unchecked(tau, 2),
            &flats.yh.eval_unchecked(tau, 2),
            &xl,
            &flats.yl.eval_unchecked(tau, 2),
            jib_radius,
            params,
        )?;
        let (sin, cos) = s.angle.sin_cos();
        r.x_residual = r.x_residual.max((s.trolley_x - jib_radius * cos).abs());
        r.y_residual = r.y_residual.max((params.project(&yl, 0) - jib_radius * sin).abs());
        for (m, v) in
            r.max_swings.iter_mut().zip([s.hook_radial, s.hook_tangential, s.payload_radial, s.payload_tangential])
        {
            *m = m.max(v.abs());
        }
    }
    Ok(r)
}
