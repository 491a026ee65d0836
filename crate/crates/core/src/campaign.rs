//! End-to-end workflows behind the command-line front-end: planning,
//! multi-run comparison, grid sweeps and trajectory validation.

use std::sync::Mutex;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{MetricsConfig, PlanConfig};
use crate::decision::{afmf_select, AfmfResult};
use crate::error::{Error, Result};
use crate::metrics::{aggregate_stats, fe_to_converge, hyperarea, spacing, Normalization, ParetoFront, RunStats};
use crate::moea::{self, AlgorithmRegistry, MoeaConfig, PopulationInit, Problem};
use crate::motop::{MotopProblem, Plan, PlanState, Sweep};
use crate::oracle::{integrate_sampled, max_step, slew_consistency_report, SampledSignal};
use crate::problems::ProblemRegistry;
use crate::report::{Cell, NumericCsv, Table};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "FLATCRANE_THREADS";

/// Hyperarea reference point in normalized objective space.
pub const HA_REFERENCE: [f64; 2] = [1.0, 1.0];

/// Relative slack on limit checks of parsed CSV values, covering
/// nine-digit rounding.
pub const CSV_LIMIT_SLACK: f64 = 1e-8;

/// Worker count: available cores, capped by [`THREADS_ENV`] when set.
pub fn thread_count() -> Result<usize> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(available),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n.min(available)),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
    }
}

/// Seed of run `run` in a campaign. Both algorithms share it.
pub fn run_seed(campaign_seed: u64, run: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(campaign_seed);
    rng.set_stream(run as u64);
    rng.next_u64()
}

pub fn problem_normalization(problem: &dyn Problem) -> Normalization {
    let [a, b] = problem.objective_scale();
    Normalization::new(a, b)
}

/// Indicators of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub problem: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub hyperarea: f64,
    pub spacing: f64,
    pub fe_to_converge: usize,
    pub front_size: usize,
    /// `(evaluations, hyperarea)` after each generation.
    pub convergence: Vec<(usize, f64)>,
}

pub fn measure_run(
    problem: &dyn Problem,
    moea_cfg: &MoeaConfig,
    init: &dyn PopulationInit,
    metrics: &MetricsConfig,
    run: usize,
) -> Result<RunMetrics> {
    let result = moea::run(problem, moea_cfg, init)?;
    let norm = problem_normalization(problem);
    let convergence = result
        .history
        .iter()
        .map(|h| hyperarea(&h.front, HA_REFERENCE, &norm).map(|ha| (h.evaluations, ha)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunMetrics {
        problem: problem.name().to_string(),
        algorithm: init.name().to_string(),
        run,
        seed: moea_cfg.seed,
        hyperarea: convergence.last().map_or(0.0, |c| c.1),
        spacing: spacing(result.front(), &norm),
        fe_to_converge: fe_to_converge(&convergence, metrics.epsilon)?,
        front_size: result.front().len(),
        convergence,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatRow {
    pub metric: &'static str,
    pub algorithm: String,
    pub problem: String,
    pub stats: RunStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Grouped by algorithm in request order, then by run index.
    pub runs: Vec<RunMetrics>,
    pub stats: Vec<StatRow>,
}

impl Comparison {
    pub fn stat(&self, metric: &str, algorithm: &str) -> Option<&RunStats> {
        self.stats.iter().find(|r| r.metric == metric && r.algorithm == algorithm).map(|r| &r.stats)
    }

    pub fn runs_table(&self) -> Table {
        let mut t = Table::new(&[
            "problem",
            "algorithm",
            "run",
            "seed",
            "hyperarea",
            "spacing",
            "fe_to_converge",
            "front_size",
        ]);
        for r in &self.runs {
            t.push(vec![
                r.problem.clone().into(),
                r.algorithm.clone().into(),
                r.run.into(),
                r.seed.into(),
                r.hyperarea.into(),
                r.spacing.into(),
                r.fe_to_converge.into(),
                r.front_size.into(),
            ]);
        }
        t
    }

    pub fn stats_table(&self) -> Table {
        let mut t = Table::new(&["metric", "algorithm", "problem", "mean", "std", "q0", "q1", "q2", "q3", "q4"]);
        for r in &self.stats {
            let mut row: Vec<Cell> = vec![
                r.metric.into(),
                r.algorithm.clone().into(),
                r.problem.clone().into(),
                r.stats.mean.into(),
                r.stats.std.into(),
            ];
            row.extend(r.stats.quartiles.iter().map(|&q| Cell::from(q)));
            t.push(row);
        }
        t
    }
}

/// Runs every algorithm `runs` times on `problem` with paired seeds derived
/// from `moea_cfg.seed`, spread over `threads` workers.
pub fn compare(
    problem: &dyn Problem,
    moea_cfg: &MoeaConfig,
    metrics: &MetricsConfig,
    algorithms: &[&str],
    runs: usize,
    threads: usize,
) -> Result<Comparison> {
    if runs < 2 {
        return Err(Error::StatsDomain(runs));
    }
    let registry = AlgorithmRegistry::default();
    let inits = algorithms.iter().map(|a| registry.get(a)).collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..inits.len()).flat_map(|a| (0..runs).map(move |r| (a, r))).collect();
    let slots: Vec<Mutex<Option<Result<RunMetrics>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let workers = threads.clamp(1, jobs.len());

    std::thread::scope(|s| {
        for w in 0..workers {
            let (jobs, slots, inits) = (&jobs, &slots, &inits);
            s.spawn(move || {
                for k in (w..jobs.len()).step_by(workers) {
                    let (a, r) = jobs[k];
                    let cfg = moea_cfg.with_seed(run_seed(moea_cfg.seed, r));
                    let out = measure_run(problem, &cfg, inits[a].as_ref(), metrics, r);
                    *slots[k].lock().expect("slot lock") = Some(out);
                }
            });
        }
    });

    let results = slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every job ran"))
        .collect::<Result<Vec<_>>>()?;

    let mut stats = Vec::new();
    for (a, init) in inits.iter().enumerate() {
        let mine = &results[a * runs..(a + 1) * runs];
        let columns: [(&'static str, Vec<f64>); 3] = [
            ("hyperarea", mine.iter().map(|m| m.hyperarea).collect()),
            ("spacing", mine.iter().map(|m| m.spacing).collect()),
            ("fe_to_converge", mine.iter().map(|m| m.fe_to_converge as f64).collect()),
        ];
        for (metric, values) in columns {
            stats.push(StatRow {
                metric,
                algorithm: init.name().to_string(),
                problem: problem.name().to_string(),
                stats: aggregate_stats(&values)?,
            });
        }
    }
    Ok(Comparison { runs: results, stats })
}

/// Builds the configured problem from the default registry.
pub fn build_problem(cfg: &PlanConfig) -> Result<Box<dyn Problem>> {
    ProblemRegistry::default().build(&cfg.problem, cfg)
}

fn motop_problem(cfg: &PlanConfig) -> Result<MotopProblem> {
    if cfg.problem != "t-motop" && cfg.problem != "s-motop" {
        return Err(Error::Config(format!("'{}' is not a crane trajectory problem", cfg.problem)));
    }
    MotopProblem::new(cfg.operation, cfg.limits, cfg.crane, cfg.sampling, cfg.metrics.f2_cap)
}

/// A front with decision times and the fuzzy selection on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectedFront {
    pub front: ParetoFront,
    pub times: Vec<f64>,
    pub afmf: AfmfResult,
}

impl SelectedFront {
    fn new(front: ParetoFront, times: Vec<f64>) -> Result<Self> {
        let afmf = afmf_select(&front)?;
        Ok(Self { front, times, afmf })
    }

    pub fn selected_time(&self) -> f64 {
        self.times[self.afmf.selected]
    }

    pub fn selected_point(&self) -> [f64; 2] {
        self.front.points()[self.afmf.selected]
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["t_op", "f1", "f2", "lambda1", "lambda2", "Lambda", "selected"]);
        let lambda = self.afmf.lambda();
        for (i, p) in self.front.points().iter().enumerate() {
            t.push(vec![
                self.times[i].into(),
                p[0].into(),
                p[1].into(),
                self.afmf.lambda1[i].into(),
                self.afmf.lambda2[i].into(),
                lambda[i].into(),
                (i == self.afmf.selected).into(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub algorithm: String,
    pub selection: SelectedFront,
    pub trajectory: Table,
    pub evaluations: usize,
}

impl PlanOutcome {
    pub fn summary(&self) -> String {
        let [f1, f2] = self.selection.selected_point();
        format!(
            "algorithm: {}\nevaluations: {}\nfront size: {}\nselected t_op: {}\nselected f2: {}\nLambda: {}\n",
            self.algorithm,
            self.evaluations,
            self.selection.front.len(),
            crate::report::fmt_sig9(f1),
            crate::report::fmt_sig9(f2),
            crate::report::fmt_sig9(self.selection.afmf.lambda_max),
        )
    }
}

/// Optimizes the configured move, selects an operating time and samples the
/// selected trajectory.
pub fn plan(cfg: &PlanConfig) -> Result<PlanOutcome> {
    let problem = motop_problem(cfg)?;
    let init = AlgorithmRegistry::default().get(&cfg.algorithm)?;
    let result = moea::run(&problem, &cfg.moea, init.as_ref())?;
    if result.front().is_empty() {
        return Err(Error::Infeasible { t_max: cfg.operation.t_max });
    }
    let times = result.front_solutions().iter().map(|s| s.x[0]).collect();
    let selection = SelectedFront::new(result.front().clone(), times)?;
    let trajectory = trajectory_table(&problem, selection.selected_time())?;
    Ok(PlanOutcome { algorithm: init.name().to_string(), selection, trajectory, evaluations: result.evaluations })
}

pub const TROLLEY_COLUMNS: [&str; 9] = [
    "t",
    "position",
    "velocity",
    "acceleration",
    "hook_swing",
    "payload_swing",
    "hook_swing_rate",
    "payload_swing_rate",
    "t_op",
];

pub const SLEW_COLUMNS: [&str; 10] = [
    "t",
    "angle",
    "rate",
    "acceleration",
    "hook_radial",
    "hook_tangential",
    "payload_radial",
    "payload_tangential",
    "trolley_x",
    "t_op",
];

/// Samples the plan for `t_op` on an even number of equal intervals no
/// longer than the configured `dt`, ending exactly at `t_op`.
pub fn trajectory_table(problem: &MotopProblem, t_op: f64) -> Result<Table> {
    let plan = problem.spec.plan(t_op)?;
    let mut n = (t_op / problem.sampling.dt - 1e-9).ceil().max(2.0) as usize;
    n += n % 2;
    let mut table = match plan {
        Plan::Trolley(_) => Table::new(&TROLLEY_COLUMNS),
        Plan::Slew { .. } => Table::new(&SLEW_COLUMNS),
    };
    for k in 0..=n {
        let tau = k as f64 / n as f64;
        let t = tau * t_op;
        let row: Vec<Cell> = match plan.state_at(tau, &problem.params)? {
            PlanState::Trolley(s) => vec![
                t.into(),
                s.position.into(),
                s.velocity.into(),
                s.acceleration.into(),
                s.hook_swing.into(),
                s.payload_swing.into(),
                s.hook_swing_rate.into(),
                s.payload_swing_rate.into(),
                t_op.into(),
            ],
            PlanState::Slew(s) => vec![
                t.into(),
                s.angle.into(),
                s.rate.into(),
                s.acceleration.into(),
                s.hook_radial.into(),
                s.hook_tangential.into(),
                s.payload_radial.into(),
                s.payload_tangential.into(),
                s.trolley_x.into(),
                t_op.into(),
            ],
        };
        table.push(row);
    }
    Ok(table)
}

/// Dense grid sweep of the configured move with the fuzzy selection on its
/// front.
pub fn sweep(cfg: &PlanConfig) -> Result<(Sweep, SelectedFront)> {
    let problem = motop_problem(cfg)?;
    let sw = problem.sweep(cfg.sweep_step)?;
    if sw.front.is_empty() {
        return Err(Error::Infeasible { t_max: cfg.operation.t_max });
    }
    let sel = SelectedFront::new(sw.front.clone(), sw.front_times.clone())?;
    Ok((sw, sel))
}

pub fn sweep_table(sw: &Sweep) -> Table {
    let mut t = Table::new(&["t_op", "f1", "f2", "violation", "feasible"]);
    for r in &sw.rows {
        let o = r.objectives;
        t.push(vec![r.t_op.into(), o.f1.into(), o.f2.into(), o.violation.into(), o.is_feasible().into()]);
    }
    t
}

/// Outcome of checking a sampled trajectory file.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Peak `|value| / limit` per constrained column.
    pub ratios: Vec<(String, f64)>,
    /// Trolley: largest gap between file swings and simulated swings (rad).
    pub max_deviation: Option<f64>,
    /// Trolley: simulated `[α_h, α_h', α_l, α_l']` at the end (rad, rad/s).
    pub terminal: Option<[f64; 4]>,
    /// Slew: projection residuals of the plan rebuilt for the file's `t_op`.
    pub x_residual: Option<f64>,
    pub y_residual: Option<f64>,
}

impl ValidationReport {
    pub fn violations(&self) -> Vec<&str> {
        self.ratios.iter().filter(|(_, r)| *r > 1.0 + CSV_LIMIT_SLACK).map(|(n, _)| n.as_str()).collect()
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, r) in &self.ratios {
            let flag = if *r > 1.0 + CSV_LIMIT_SLACK { "EXCEEDED" } else { "ok" };
            out.push_str(&format!("limit {name}: max ratio {} {flag}\n", crate::report::fmt_sig9(*r)));
        }
        if let Some(d) = self.max_deviation {
            out.push_str(&format!("max flat-vs-sim swing deviation (rad): {}\n", crate::report::fmt_sig9(d)));
        }
        if let Some(t) = self.terminal {
            let t: Vec<String> = t.iter().map(|v| crate::report::fmt_sig9(*v)).collect();
            out.push_str(&format!("terminal hook swing, rate, payload swing, rate: {}\n", t.join(", ")));
        }
        if let Some(x) = self.x_residual {
            out.push_str(&format!("x-projection residual (m): {}\n", crate::report::fmt_sig9(x)));
        }
        if let Some(y) = self.y_residual {
            out.push_str(&format!("y-projection residual (m): {}\n", crate::report::fmt_sig9(y)));
        }
        let violations = self.violations();
        if violations.is_empty() {
            out.push_str("PASS\n");
        } else {
            out.push_str(&format!("FAIL: {}\n", violations.join(", ")));
        }
        out
    }
}

fn require(csv: &NumericCsv, name: &str) -> Result<Vec<f64>> {
    csv.column(name).ok_or_else(|| Error::InvalidInput(format!("trajectory file lacks column '{name}'")))
}

fn uniform_step(t: &[f64]) -> Result<f64> {
    if t.len() < 3 || t[0] != 0.0 {
        return Err(Error::InvalidInput("trajectory must start at t = 0 with at least 3 samples".into()));
    }
    let dt = t[t.len() - 1] / (t.len() - 1) as f64;
    if t.iter().enumerate().any(|(k, &v)| (v - k as f64 * dt).abs() > 1e-6 * dt.max(1.0)) {
        return Err(Error::InvalidInput("trajectory samples are not uniformly spaced".into()));
    }
    Ok(dt)
}

fn peak(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Checks a trajectory file against the configured limits and the dynamics
/// oracle.
///
/// Trolley files drive the swing simulation with their own acceleration
/// column, at twice the file spacing so every RK4 stage lands on a sample.
/// Slew files are checked for limits and the plan rebuilt for their `t_op`
/// is checked for projection consistency.
pub fn validate(cfg: &PlanConfig, csv_text: &str) -> Result<ValidationReport> {
    let csv = NumericCsv::parse(csv_text).map_err(Error::InvalidInput)?;
    let t = require(&csv, "t")?;
    let dt = uniform_step(&t)?;
    let l = &cfg.limits;
    let mut report = ValidationReport {
        ratios: Vec::new(),
        max_deviation: None,
        terminal: None,
        x_residual: None,
        y_residual: None,
    };
    if cfg.operation.is_trolley() {
        let checks = [
            ("trolley_velocity", "velocity", l.trolley_velocity),
            ("trolley_acceleration", "acceleration", l.trolley_acceleration),
            ("hook_swing", "hook_swing", l.hook_radial),
            ("payload_swing", "payload_swing", l.payload_radial),
        ];
        for (name, col, lim) in checks {
            report.ratios.push((name.to_string(), peak(&require(&csv, col)?) / lim));
        }
        let acc = require(&csv, "acceleration")?;
        let hook = require(&csv, "hook_swing")?;
        let payload = require(&csv, "payload_swing")?;
        let intervals = t.len() - 1;
        let stride = if intervals % 2 == 0 && 2.0 * dt <= max_step(&cfg.crane) { 2 } else { 1 };
        let signal = SampledSignal::new(dt, acc)?;
        let trace = integrate_sampled(&signal, &cfg.crane, stride as f64 * dt)?;
        let mut dev: f64 = 0.0;
        for k in 0..trace.len() {
            let i = k * stride;
            dev = dev.max((trace.hook[k] - hook[i]).abs()).max((trace.payload[k] - payload[i]).abs());
        }
        report.max_deviation = Some(dev);
        report.terminal = Some(trace.terminal());
    } else {
        let checks = [
            ("slew_rate", "rate", l.slew_rate),
            ("slew_acceleration", "acceleration", l.slew_acceleration),
            ("hook_radial_swing", "hook_radial", l.hook_radial),
            ("hook_tangential_swing", "hook_tangential", l.hook_tangential),
            ("payload_radial_swing", "payload_radial", l.payload_radial),
            ("payload_tangential_swing", "payload_tangential", l.payload_tangential),
        ];
        for (name, col, lim) in checks {
            report.ratios.push((name.to_string(), peak(&require(&csv, col)?) / lim));
        }
        let t_op = require(&csv, "t_op")?[0];
        if let Plan::Slew { flats, jib_radius } = cfg.operation.plan(t_op)? {
            let r = slew_consistency_report(&flats, jib_radius, &cfg.crane, cfg.sampling.n_samples)?;
            report.x_residual = Some(r.x_residual);
            report.y_residual = Some(r.y_residual);
        }
    }
    Ok(report)
}
