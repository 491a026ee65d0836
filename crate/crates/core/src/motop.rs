//! Time-versus-effort trajectory optimization problems for trolley and slew
//! moves.
//!
//! The flat outputs are fixed polynomials in normalized time, so a plan is
//! determined by its operating time alone. Evaluating a candidate time
//! samples the planned states on a uniform grid, integrates the normalized
//! actuator effort with composite Simpson and sums the relative exceedance
//! of every state limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Normalization, ParetoFront};
use crate::model::{
    slew_states_from_flat, trolley_states_from_flat, CraneParams, FlatDerivStack, SlewState, TrolleyState, MAX_ORDER,
};
use crate::moea::{Bounds, Objectives, Problem};
use crate::trajectory::{build_slew_flats, build_trolley_flat, check_slew_range, FlatTrajectory, Shape, SlewFlats};

/// Boundary values of a single move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    /// Trolley travel along the jib between two positions (m).
    Trolley { from: f64, to: f64 },
    /// Jib rotation between two slew angles (rad) with the trolley parked at
    /// `jib_radius` (m).
    Slew { from: f64, to: f64, jib_radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperationSpec {
    pub motion: Motion,
    /// Upper bound on the operating time (s).
    pub t_max: f64,
}

impl OperationSpec {
    pub fn trolley(from: f64, to: f64, t_max: f64) -> Self {
        Self { motion: Motion::Trolley { from, to }, t_max }
    }

    pub fn slew(from: f64, to: f64, jib_radius: f64, t_max: f64) -> Self {
        Self { motion: Motion::Slew { from, to, jib_radius }, t_max }
    }

    /// Trolley move of the scale-model study: 1 m to 2 m within 8 s.
    pub fn reference_trolley() -> Self {
        Self::trolley(1.0, 2.0, 8.0)
    }

    /// Slew move of the scale-model study: 30° to 60° at 1 m within 8 s.
    pub fn reference_slew() -> Self {
        Self::slew(30f64.to_radians(), 60f64.to_radians(), 1.0, 8.0)
    }

    pub fn is_trolley(&self) -> bool {
        matches!(self.motion, Motion::Trolley { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::Config(format!("t_max must be > 0, got {}", self.t_max)));
        }
        match self.motion {
            Motion::Trolley { from, to } => {
                if !(from.is_finite() && to.is_finite()) {
                    return Err(Error::Config("trolley boundary positions must be finite".into()));
                }
            }
            Motion::Slew { from, to, jib_radius } => {
                if !(jib_radius.is_finite() && jib_radius > 0.0) {
                    return Err(Error::Config(format!("jib radius must be > 0, got {jib_radius}")));
                }
                check_slew_range(from, to).map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Builds the flat-output plan for operating time `t_op`.
    pub fn plan(&self, t_op: f64) -> Result<Plan> {
        match self.motion {
            Motion::Trolley { from, to } => Ok(Plan::Trolley(build_trolley_flat(from, to, t_op)?)),
            Motion::Slew { from, to, jib_radius } => {
                Ok(Plan::Slew { flats: build_slew_flats(from, to, jib_radius, t_op)?, jib_radius })
            }
        }
    }
}

/// Maximum admissible magnitudes of the planned states, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLimits {
    pub trolley_velocity: f64,
    pub trolley_acceleration: f64,
    pub slew_rate: f64,
    pub slew_acceleration: f64,
    pub hook_radial: f64,
    pub hook_tangential: f64,
    pub payload_radial: f64,
    pub payload_tangential: f64,
}

impl StateLimits {
    /// Limits of the scale-model study: 0.5 m/s, 0.5 m/s², 20°/s, 20°/s² and
    /// 2.5° on every swing angle.
    pub fn scale_model() -> Self {
        let swing = 2.5f64.to_radians();
        Self {
            trolley_velocity: 0.5,
            trolley_acceleration: 0.5,
            slew_rate: 20f64.to_radians(),
            slew_acceleration: 20f64.to_radians(),
            hook_radial: swing,
            hook_tangential: swing,
            payload_radial: swing,
            payload_tangential: swing,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            trolley_velocity: self.trolley_velocity * k,
            trolley_acceleration: self.trolley_acceleration * k,
            slew_rate: self.slew_rate * k,
            slew_acceleration: self.slew_acceleration * k,
            hook_radial: self.hook_radial * k,
            hook_tangential: self.hook_tangential * k,
            payload_radial: self.payload_radial * k,
            payload_tangential: self.payload_tangential * k,
        }
    }

    /// All limits positive; swing limits inside the small-angle range (< 5°).
    /// Relaxed limits used for sensitivity studies may skip the swing check.
    pub fn validate(&self, small_angle: bool) -> Result<()> {
        let all = [
            ("trolley_velocity", self.trolley_velocity),
            ("trolley_acceleration", self.trolley_acceleration),
            ("slew_rate", self.slew_rate),
            ("slew_acceleration", self.slew_acceleration),
            ("hook_radial", self.hook_radial),
            ("hook_tangential", self.hook_tangential),
            ("payload_radial", self.payload_radial),
            ("payload_tangential", self.payload_tangential),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("limit {name} must be > 0, got {v}")));
            }
        }
        if small_angle {
            for (name, v) in &all[4..] {
                if *v >= 5f64.to_radians() {
                    return Err(Error::Config(format!(
                        "swing limit {name} = {:.3} deg is outside the small-angle range",
                        v.to_degrees()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    /// Uniform samples per evaluation; odd so composite Simpson applies.
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    /// Output and simulation time step (s).
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Smallest admissible operating time (s).
    #[serde(default = "default_floor")]
    pub t_floor: f64,
}

fn default_samples() -> usize {
    2001
}
fn default_dt() -> f64 {
    1e-3
}
fn default_floor() -> f64 {
    0.1
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { n_samples: default_samples(), dt: default_dt(), t_floor: default_floor() }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 3 || self.n_samples % 2 == 0 {
            return Err(Error::Config(format!("n_samples must be odd and >= 3, got {}", self.n_samples)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_floor.is_finite() && self.t_floor > 0.0) {
            return Err(Error::Config(format!("t_floor must be > 0, got {}", self.t_floor)));
        }
        Ok(())
    }
}

/// Flat-output trajectories of one planned move.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Trolley(FlatTrajectory),
    Slew { flats: SlewFlats, jib_radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanState {
    Trolley(TrolleyState),
    Slew(SlewState),
}

impl PlanState {
    /// Actuator acceleration driving the effort objective.
    pub fn actuator_acceleration(&self) -> f64 {
        match self {
            PlanState::Trolley(s) => s.acceleration,
            PlanState::Slew(s) => s.acceleration,
        }
    }
}

/// Names of the constrained channels of a trolley plan, in
/// [`Plan::constrained`] order.
pub const TROLLEY_CHANNELS: [&str; 4] = ["trolley_velocity", "trolley_acceleration", "hook_swing", "payload_swing"];

/// Names of the constrained channels of a slew plan.
pub const SLEW_CHANNELS: [&str; 6] = [
    "slew_rate",
    "slew_acceleration",
    "hook_radial_swing",
    "hook_tangential_swing",
    "payload_radial_swing",
    "payload_tangential_swing",
];

impl Plan {
    pub fn duration(&self) -> f64 {
        match self {
            Plan::Trolley(t) => t.duration(),
            Plan::Slew { flats, .. } => flats.duration(),
        }
    }

    /// State at normalized time `tau` in `[0, 1]`.
    pub fn state_at(&self, tau: f64, params: &CraneParams) -> Result<PlanState> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::OutOfRange { t: tau * self.duration(), t_op: self.duration() });
        }
        match self {
            Plan::Trolley(dl) => Ok(PlanState::Trolley(trolley_states_from_flat(&dl.eval_unchecked(tau, 6), params)?)),
            Plan::Slew { flats, jib_radius } => Ok(PlanState::Slew(slew_states_from_flat(
                &flats.xh.eval_unchecked(tau, 2),
                &flats.yh.eval_unchecked(tau, 2),
                &flats.xl.eval_unchecked(tau, 6),
                &flats.yl.eval_unchecked(tau, 2),
                *jib_radius,
                params,
            )?)),
        }
    }

    pub fn channel_names(&self) -> &'static [&'static str] {
        match self {
            Plan::Trolley(_) => &TROLLEY_CHANNELS,
            Plan::Slew { .. } => &SLEW_CHANNELS,
        }
    }

    /// Constrained state magnitudes and their limits, aligned with
    /// [`channel_names`](Self::channel_names).
    pub fn constrained(state: &PlanState, limits: &StateLimits) -> ([f64; 6], [f64; 6], usize) {
        match state {
            PlanState::Trolley(s) => (
                [s.velocity, s.acceleration, s.hook_swing, s.payload_swing, 0.0, 0.0],
                [
                    limits.trolley_velocity,
                    limits.trolley_acceleration,
                    limits.hook_radial,
                    limits.payload_radial,
                    1.0,
                    1.0,
                ],
                4,
            ),
            PlanState::Slew(s) => (
                [s.rate, s.acceleration, s.hook_radial, s.hook_tangential, s.payload_radial, s.payload_tangential],
                [
                    limits.slew_rate,
                    limits.slew_acceleration,
                    limits.hook_radial,
                    limits.hook_tangential,
                    limits.payload_radial,
                    limits.payload_tangential,
                ],
                6,
            ),
        }
    }

    fn actuator_limit(&self, limits: &StateLimits) -> f64 {
        match self {
            Plan::Trolley(_) => limits.trolley_acceleration,
            Plan::Slew { .. } => limits.slew_acceleration,
        }
    }
}

/// Objectives plus the peak `|state| / limit` of every constrained channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub objectives: Objectives,
    pub peak_ratios: Vec<(&'static str, f64)>,
}

impl Assessment {
    pub fn max_ratio(&self) -> f64 {
        self.peak_ratios.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

/// Composite Simpson weights times `h / 3` applied to uniformly spaced
/// samples; `values.len()` must be odd.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    let inner: f64 = values[1..n - 1].iter().enumerate().map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v }).sum();
    h / 3.0 * (values[0] + values[n - 1] + inner)
}

/// Unit-shape derivatives `S^(n)(tau_i)` on the sampling grid
/// `tau_i = i / (n - 1)`. The grid does not depend on the operating time, so
/// a plan's samples follow by rescaling: `d^(n)(t) = delta * S^(n)(tau) / t^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGrid {
    septic: Vec<FlatDerivStack>,
    quintic: Vec<FlatDerivStack>,
}

impl UnitGrid {
    pub fn new(n_samples: usize) -> Self {
        let unit = |shape| FlatTrajectory::smoothstep(shape, 0.0, 1.0, 1.0).expect("unit shape is valid");
        let (sep, quin) = (unit(Shape::Septic), unit(Shape::Quintic));
        let last = (n_samples.max(2) - 1) as f64;
        let taus = (0..n_samples).map(|i| i as f64 / last);
        Self {
            septic: taus.clone().map(|t| sep.eval_unchecked(t, 6)).collect(),
            quintic: taus.map(|t| quin.eval_unchecked(t, 2)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.septic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.septic.is_empty()
    }

    /// Planned state at grid sample `i`.
    pub fn state(&self, plan: &Plan, i: usize, params: &CraneParams) -> Result<PlanState> {
        match plan {
            Plan::Trolley(dl) => {
                Ok(PlanState::Trolley(trolley_states_from_flat(&rescale(&self.septic[i], dl), params)?))
            }
            Plan::Slew { flats, jib_radius } => Ok(PlanState::Slew(slew_states_from_flat(
                &rescale(&self.quintic[i], &flats.xh),
                &rescale(&self.quintic[i], &flats.yh),
                &rescale(&self.septic[i], &flats.xl),
                &rescale(&self.quintic[i], &flats.yl),
                *jib_radius,
                params,
            )?)),
        }
    }
}

fn rescale(unit: &FlatDerivStack, flat: &FlatTrajectory) -> FlatDerivStack {
    let u = unit.as_slice();
    let inv = 1.0 / flat.duration();
    let mut out = [0.0; MAX_ORDER + 1];
    out[0] = flat.start() + flat.delta() * u[0];
    let mut scale = flat.delta();
    for n in 1..u.len() {
        scale *= inv;
        out[n] = u[n] * scale;
    }
    FlatDerivStack::from_raw(out, u.len())
}

/// Full evaluation of operating time `t_op`, with per-channel peaks.
///
/// Model errors during sampling (slew singularity, projection out of range)
/// produce an infinite violation instead of an error.
pub fn assess(
    spec: &OperationSpec,
    limits: &StateLimits,
    params: &CraneParams,
    t_op: f64,
    sampling: &SamplingConfig,
) -> Result<Assessment> {
    assess_on(&UnitGrid::new(sampling.n_samples), spec, limits, params, t_op, sampling)
}

/// [`assess`] on a precomputed grid of `sampling.n_samples` points.
pub fn assess_on(
    grid: &UnitGrid,
    spec: &OperationSpec,
    limits: &StateLimits,
    params: &CraneParams,
    t_op: f64,
    sampling: &SamplingConfig,
) -> Result<Assessment> {
    if !(t_op.is_finite() && t_op > 0.0) {
        return Err(Error::InvalidTime(t_op));
    }
    if grid.len() != sampling.n_samples {
        return Err(Error::InvalidInput(format!(
            "grid has {} samples, sampling asks for {}",
            grid.len(),
            sampling.n_samples
        )));
    }
    let plan = match spec.plan(t_op) {
        Ok(p) => p,
        Err(Error::SlewSingularity { .. }) | Err(Error::ProjectionOutOfRange { .. }) => {
            return Ok(failed_assessment(spec, t_op))
        }
        Err(e) => return Err(e),
    };
    let n = sampling.n_samples;
    let acc_limit = plan.actuator_limit(limits);
    let mut effort = Vec::with_capacity(n);
    let mut peaks = [0.0f64; 6];
    let mut violation = 0.0;
    let mut channels = 0;
    for i in 0..n {
        let state = match grid.state(&plan, i, params) {
            Ok(s) => s,
            Err(Error::SlewSingularity { .. }) | Err(Error::ProjectionOutOfRange { .. }) => {
                return Ok(failed_assessment(spec, t_op))
            }
            Err(e) => return Err(e),
        };
        let a = state.actuator_acceleration() / acc_limit;
        effort.push(a * a);
        let (values, lims, k) = Plan::constrained(&state, limits);
        channels = k;
        for c in 0..k {
            let ratio = values[c].abs() / lims[c];
            peaks[c] = peaks[c].max(ratio);
            violation += (ratio - 1.0).max(0.0);
        }
    }
    violation += ((t_op - spec.t_max) / spec.t_max).max(0.0);
    let f2 = simpson(&effort, t_op / (n - 1) as f64);
    Ok(Assessment {
        objectives: Objectives { f1: t_op, f2, violation },
        peak_ratios: plan.channel_names().iter().copied().zip(peaks[..channels].iter().copied()).collect(),
    })
}

fn failed_assessment(spec: &OperationSpec, t_op: f64) -> Assessment {
    let names: &[&'static str] = if spec.is_trolley() { &TROLLEY_CHANNELS } else { &SLEW_CHANNELS };
    Assessment {
        objectives: Objectives { f1: t_op, f2: f64::INFINITY, violation: f64::INFINITY },
        peak_ratios: names.iter().map(|&n| (n, f64::INFINITY)).collect(),
    }
}

/// Operating time, normalized effort and aggregated violation of `t_op`.
pub fn evaluate(
    spec: &OperationSpec,
    limits: &StateLimits,
    params: &CraneParams,
    t_op: f64,
    sampling: &SamplingConfig,
) -> Result<Objectives> {
    assess(spec, limits, params, t_op, sampling).map(|a| a.objectives)
}

/// Resolution of [`feasibility_frontier`] (s).
pub const FRONTIER_RESOLUTION: f64 = 1e-3;

/// Smallest feasible operating time in `[t_floor, t_max]`, by bisection to
/// [`FRONTIER_RESOLUTION`]. Assumes feasibility is monotone in time.
pub fn feasibility_frontier(
    spec: &OperationSpec,
    limits: &StateLimits,
    params: &CraneParams,
    sampling: &SamplingConfig,
) -> Result<f64> {
    let grid = UnitGrid::new(sampling.n_samples);
    feasible_frontier_on(&grid, spec, limits, params, sampling)
}

fn feasible_frontier_on(
    grid: &UnitGrid,
    spec: &OperationSpec,
    limits: &StateLimits,
    params: &CraneParams,
    sampling: &SamplingConfig,
) -> Result<f64> {
    let feasible = |t: f64| assess_on(grid, spec, limits, params, t, sampling).map(|a| a.objectives.is_feasible());
    let (mut lo, mut hi) = (sampling.t_floor, spec.t_max);
    if !feasible(hi)? {
        return Err(Error::Infeasible { t_max: spec.t_max });
    }
    if feasible(lo)? {
        return Ok(lo);
    }
    while hi - lo > FRONTIER_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t_op: f64,
    pub objectives: Objectives,
}

/// Deterministic grid sweep over operating times.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Feasible nondominated subset of `rows`.
    pub front: ParetoFront,
    /// Operating time of each front member.
    pub front_times: Vec<f64>,
}

impl Sweep {
    pub fn min_feasible_time(&self) -> Option<f64> {
        self.front_times.first().copied()
    }

    pub fn row_at(&self, t: f64) -> Option<&SweepRow> {
        self.rows.iter().min_by(|a, b| (a.t_op - t).abs().total_cmp(&(b.t_op - t).abs()))
    }
}

/// Evaluates every multiple of `step` in `[t_floor, t_max]`.
pub fn sweep(
    spec: &OperationSpec,
    limits: &StateLimits,
    params: &CraneParams,
    sampling: &SamplingConfig,
    step: f64,
) -> Result<Sweep> {
    sweep_on(&UnitGrid::new(sampling.n_samples), spec, limits, params, sampling, step)
}

fn sweep_on(
    grid: &UnitGrid,
    spec: &OperationSpec,
    limits: &StateLimits,
    params: &CraneParams,
    sampling: &SamplingConfig,
    step: f64,
) -> Result<Sweep> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Config(format!("sweep step must be > 0, got {step}")));
    }
    let first = (sampling.t_floor / step - 1e-9).ceil() as i64;
    let last = (spec.t_max / step + 1e-9).floor() as i64;
    let rows = (first..=last)
        .map(|k| {
            let t_op = k as f64 * step;
            assess_on(grid, spec, limits, params, t_op, sampling).map(|a| SweepRow { t_op, objectives: a.objectives })
        })
        .collect::<Result<Vec<_>>>()?;
    let feasible: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].objectives.is_feasible()).collect();
    let pts: Vec<[f64; 2]> = feasible.iter().map(|&i| rows[i].objectives.pair()).collect();
    let (front, idx) = ParetoFront::extract(&pts);
    let front_times = idx.into_iter().map(|k| rows[feasible[k]].t_op).collect();
    Ok(Sweep { rows, front, front_times })
}

/// A trolley or slew move as a one-dimensional [`Problem`] over the
/// operating time.
#[derive(Debug, Clone)]
pub struct MotopProblem {
    name: String,
    pub spec: OperationSpec,
    pub limits: StateLimits,
    pub params: CraneParams,
    pub sampling: SamplingConfig,
    bounds: Bounds,
    f2_cap: f64,
    grid: UnitGrid,
}

impl MotopProblem {
    pub fn new(
        spec: OperationSpec,
        limits: StateLimits,
        params: CraneParams,
        sampling: SamplingConfig,
        f2_cap: f64,
    ) -> Result<Self> {
        spec.validate()?;
        params.validate()?;
        sampling.validate()?;
        limits.validate(false)?;
        if !(f2_cap.is_finite() && f2_cap > 0.0) {
            return Err(Error::Config(format!("f2_cap must be > 0, got {f2_cap}")));
        }
        if sampling.t_floor >= spec.t_max {
            return Err(Error::Config(format!("t_floor {} must be below t_max {}", sampling.t_floor, spec.t_max)));
        }
        let name = if spec.is_trolley() { "t-motop" } else { "s-motop" }.to_string();
        let bounds = Bounds::scalar(sampling.t_floor, spec.t_max)?;
        let grid = UnitGrid::new(sampling.n_samples);
        Ok(Self { name, spec, limits, params, sampling, bounds, f2_cap, grid })
    }

    /// Trolley problem of the scale-model study.
    pub fn reference_trolley() -> Self {
        Self::new(
            OperationSpec::reference_trolley(),
            StateLimits::scale_model(),
            CraneParams::scale_model(),
            SamplingConfig::default(),
            2.0,
        )
        .expect("reference trolley problem is valid")
    }

    /// Slew problem of the scale-model study.
    pub fn reference_slew() -> Self {
        Self::new(
            OperationSpec::reference_slew(),
            StateLimits::scale_model(),
            CraneParams::scale_model(),
            SamplingConfig::default(),
            2.0,
        )
        .expect("reference slew problem is valid")
    }

    pub fn normalization(&self) -> Normalization {
        Normalization::new(self.spec.t_max, self.f2_cap)
    }

    pub fn assess(&self, t_op: f64) -> Result<Assessment> {
        if self.grid.len() != self.sampling.n_samples {
            return assess(&self.spec, &self.limits, &self.params, t_op, &self.sampling);
        }
        assess_on(&self.grid, &self.spec, &self.limits, &self.params, t_op, &self.sampling)
    }

    pub fn frontier(&self) -> Result<f64> {
        if self.grid.len() != self.sampling.n_samples {
            return feasibility_frontier(&self.spec, &self.limits, &self.params, &self.sampling);
        }
        feasible_frontier_on(&self.grid, &self.spec, &self.limits, &self.params, &self.sampling)
    }

    pub fn sweep(&self, step: f64) -> Result<Sweep> {
        if self.grid.len() != self.sampling.n_samples {
            return sweep(&self.spec, &self.limits, &self.params, &self.sampling, step);
        }
        sweep_on(&self.grid, &self.spec, &self.limits, &self.params, &self.sampling, step)
    }
}

impl Problem for MotopProblem {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Objectives {
        match self.assess(x[0]) {
            Ok(a) => a.objectives,
            Err(_) => Objectives::failed(),
        }
    }

    fn objective_scale(&self) -> [f64; 2] {
        [self.spec.t_max, self.f2_cap]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_matches_direct_evaluation() {
        let params = CraneParams::scale_model();
        let n = 101;
        let grid = UnitGrid::new(n);
        for spec in [OperationSpec::reference_trolley(), OperationSpec::reference_slew()] {
            let plan = spec.plan(6.7).unwrap();
            for i in 0..n {
                let a = grid.state(&plan, i, &params).unwrap();
                let b = plan.state_at(i as f64 / (n - 1) as f64, &params).unwrap();
                let (va, _, k) = Plan::constrained(&a, &StateLimits::scale_model());
                let (vb, _, _) = Plan::constrained(&b, &StateLimits::scale_model());
                for c in 0..k {
                    assert_relative_eq!(va[c], vb[c], epsilon = 1e-12, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let n = 11;
        let h = 2.0 / (n - 1) as f64;
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
        assert_relative_eq!(simpson(&v, h), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn trolley_reference_values() {
        let p = MotopProblem::reference_trolley();
        let at8 = p.assess(8.0).unwrap().objectives;
        assert_eq!(at8.f1, 8.0);
        assert_eq!(at8.violation, 0.0);
        assert!((at8.f2 - 0.22).abs() <= 0.05 * 0.22, "{}", at8.f2);
        let at636 = p.assess(6.36).unwrap().objectives;
        assert_eq!(at636.violation, 0.0);
        assert!((at636.f2 - 0.97).abs() <= 0.05 * 0.97, "{}", at636.f2);
    }

    #[test]
    fn zero_delta_move_is_free() {
        let spec = OperationSpec::trolley(1.5, 1.5, 8.0);
        let o =
            evaluate(&spec, &StateLimits::scale_model(), &CraneParams::scale_model(), 3.0, &SamplingConfig::default())
                .unwrap();
        assert_eq!(o.f2, 0.0);
        assert_eq!(o.violation, 0.0);
    }

    #[test]
    fn overtime_is_penalized() {
        let p = MotopProblem::reference_trolley();
        let o = p.assess(9.0).unwrap().objectives;
        assert_relative_eq!(o.violation, 1.0 / 8.0, epsilon = 1e-12);
    }

    #[test]
    fn invalid_time_is_error() {
        let p = MotopProblem::reference_trolley();
        assert_eq!(p.assess(0.0).unwrap_err(), Error::InvalidTime(0.0));
        assert!(Problem::evaluate(&p, &[-1.0]).violation.is_infinite());
    }

    #[test]
    fn frontier_values() {
        let t = MotopProblem::reference_trolley().frontier().unwrap();
        assert!((t - 6.36).abs() <= 0.05, "{t}");
        let s = MotopProblem::reference_slew().frontier().unwrap();
        assert!((s - 5.69).abs() <= 0.05, "{s}");
    }

    #[test]
    fn relaxed_limits_shorten_frontier() {
        let p = MotopProblem::reference_trolley();
        let mut relaxed = p.clone();
        relaxed.limits = p.limits.scaled(10.0);
        assert!(relaxed.frontier().unwrap() < p.frontier().unwrap());
    }

    #[test]
    fn infeasible_problem_reported() {
        let mut p = MotopProblem::reference_trolley();
        p.spec.t_max = 5.0;
        assert_eq!(p.frontier().unwrap_err(), Error::Infeasible { t_max: 5.0 });
    }

    #[test]
    fn effort_nonincreasing_in_time() {
        for p in [MotopProblem::reference_trolley(), MotopProblem::reference_slew()] {
            let t0 = p.frontier().unwrap();
            let mut prev = f64::INFINITY;
            let mut t = t0;
            while t <= 8.0 {
                let f2 = p.assess(t).unwrap().objectives.f2;
                assert!(f2 <= prev, "{} at {t}: {f2} > {prev}", p.name);
                prev = f2;
                t += 0.05;
            }
        }
    }

    #[test]
    fn simpson_converged() {
        for p in [MotopProblem::reference_trolley(), MotopProblem::reference_slew()] {
            let mut fine = p.clone();
            fine.sampling.n_samples = 4001;
            for t in [6.5, 7.0, 8.0] {
                let a = p.assess(t).unwrap().objectives.f2;
                let b = fine.assess(t).unwrap().objectives.f2;
                assert!(((a - b) / b).abs() < 1e-6, "{} at {t}: {a} vs {b}", p.name);
            }
        }
    }

    #[test]
    fn violation_is_continuous() {
        let p = MotopProblem::reference_trolley();
        let a = p.assess(6.0).unwrap().objectives.violation;
        let b = p.assess(6.0 + 1e-7).unwrap().objectives.violation;
        assert!(a > 0.0 && (a - b).abs() < 1e-3 * a);
    }

    #[test]
    fn time_minimum_is_constraint_bound() {
        let p = MotopProblem::reference_trolley();
        assert!(p.assess(6.36).unwrap().max_ratio() >= 0.99);
    }

    #[test]
    fn slew_failure_is_infeasible_not_error() {
        let spec = OperationSpec::slew(2f64.to_radians(), 60f64.to_radians(), 1.0, 8.0);
        let o =
            evaluate(&spec, &StateLimits::scale_model(), &CraneParams::scale_model(), 0.2, &SamplingConfig::default())
                .unwrap();
        assert!(o.violation.is_infinite() || o.violation > 0.0);
    }
}
