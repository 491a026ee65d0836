//! The GDE3 evolution loop.
//!
//! Each generation builds one DE/rand/1/bin trial per parent from the
//! population at the start of the generation, clamps it into the bounds and
//! evaluates it. Selection then follows constraint domination: a trial that
//! is at least as good as its parent replaces it, a dominated trial is
//! discarded, and a trial that neither dominates nor is dominated joins the
//! population next to its parent. The enlarged population is cut back to
//! `pop_size` by nondominated sorting and crowding distance.
//!
//! The initial population counts against the evaluation budget. If the
//! budget does not divide evenly, the last generation only varies the first
//! few parents so the total never exceeds `fe_max`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::init::PopulationInit;
use super::sorting::truncate;
use super::{MoeaConfig, Objectives, Problem, Solution};
use crate::error::{Error, Result};
use crate::metrics::ParetoFront;

/// Snapshot taken after each generation, the initial one included.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    /// Cumulative objective evaluations so far.
    pub evaluations: usize,
    /// Feasible nondominated objective pairs of the population.
    pub front: ParetoFront,
    pub population_size: usize,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub algorithm: String,
    pub population: Vec<Solution>,
    pub history: Vec<HistoryEntry>,
    pub evaluations: usize,
}

impl RunResult {
    pub fn front(&self) -> &ParetoFront {
        &self.history.last().expect("history always has the initial entry").front
    }

    /// Feasible nondominated members of the final population, sorted by f1,
    /// aligned with [`front`](Self::front).
    pub fn front_solutions(&self) -> Vec<Solution> {
        let (_, idx) = feasible_front(&self.population);
        idx.into_iter().map(|i| self.population[i].clone()).collect()
    }

    pub fn generations(&self) -> usize {
        self.history.len() - 1
    }
}

fn feasible_front(pop: &[Solution]) -> (ParetoFront, Vec<usize>) {
    let feasible: Vec<usize> = (0..pop.len()).filter(|&i| pop[i].obj().is_feasible()).collect();
    let pts: Vec<[f64; 2]> = feasible.iter().map(|&i| pop[i].obj().pair()).collect();
    let (front, idx) = ParetoFront::extract(&pts);
    (front, idx.into_iter().map(|k| feasible[k]).collect())
}

fn evaluate(problem: &dyn Problem, x: Vec<f64>) -> Solution {
    let o = problem.evaluate(&x);
    let o = if o.f1.is_nan() || o.f2.is_nan() || o.violation.is_nan() { Objectives::failed() } else { o };
    Solution::evaluated(x, o)
}

enum Selection {
    KeepParent,
    TakeTrial,
    KeepBoth,
}

fn select(parent: &Objectives, trial: &Objectives) -> Selection {
    match (parent.is_feasible(), trial.is_feasible()) {
        (false, true) => Selection::TakeTrial,
        (true, false) => Selection::KeepParent,
        (false, false) if trial.violation <= parent.violation => Selection::TakeTrial,
        (false, false) => Selection::KeepParent,
        (true, true) if trial.weakly_dominates(parent) => Selection::TakeTrial,
        (true, true) if parent.dominates(trial) => Selection::KeepParent,
        (true, true) => Selection::KeepBoth,
    }
}

fn distinct_others(rng: &mut dyn RngCore, n: usize, exclude: usize) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    for k in 0..3 {
        loop {
            let r = rng.gen_range(0..n);
            if r != exclude && !picked[..k].contains(&r) {
                picked[k] = r;
                break;
            }
        }
    }
    picked
}

fn trial_vector(
    pop: &[Solution],
    i: usize,
    cfg: &MoeaConfig,
    problem: &dyn Problem,
    rng: &mut dyn RngCore,
) -> Vec<f64> {
    let [r1, r2, r3] = distinct_others(rng, pop.len(), i);
    let dim = pop[i].x.len();
    let j_rand = rng.gen_range(0..dim);
    let mut trial: Vec<f64> = (0..dim)
        .map(|j| {
            let crossover = rng.gen::<f64>() < cfg.cr || j == j_rand;
            if crossover {
                pop[r1].x[j] + cfg.f * (pop[r2].x[j] - pop[r3].x[j])
            } else {
                pop[i].x[j]
            }
        })
        .collect();
    problem.bounds().clamp(&mut trial);
    trial
}

fn snapshot(pop: &[Solution], evaluations: usize) -> HistoryEntry {
    HistoryEntry { evaluations, front: feasible_front(pop).0, population_size: pop.len() }
}

/// Runs GDE3 on `problem` with the first population drawn by `init`.
pub fn run(problem: &dyn Problem, cfg: &MoeaConfig, init: &dyn PopulationInit) -> Result<RunResult> {
    cfg.validate()?;
    let n = cfg.pop_size;
    let bounds = problem.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let xs = init.initialize(n, bounds, &mut rng)?;
    if xs.len() != n {
        return Err(Error::Config(format!(
            "initializer '{}' returned {} members, expected {n}",
            init.name(),
            xs.len()
        )));
    }
    let mut pop: Vec<Solution> = xs
        .into_iter()
        .map(|mut x| {
            bounds.clamp(&mut x);
            evaluate(problem, x)
        })
        .collect();
    let mut evaluations = n;
    let mut history = vec![snapshot(&pop, evaluations)];

    while evaluations < cfg.fe_max {
        let count = n.min(cfg.fe_max - evaluations);
        let trials: Vec<Vec<f64>> = (0..count).map(|i| trial_vector(&pop, i, cfg, problem, &mut rng)).collect();
        let trials: Vec<Solution> = trials.into_iter().map(|x| evaluate(problem, x)).collect();
        evaluations += count;

        let mut next = Vec::with_capacity(n + count);
        let mut trials = trials.into_iter();
        for (i, parent) in pop.into_iter().enumerate() {
            let Some(trial) = (i < count).then(|| trials.next()).flatten() else {
                next.push(parent);
                continue;
            };
            match select(parent.obj(), trial.obj()) {
                Selection::KeepParent => next.push(parent),
                Selection::TakeTrial => next.push(trial),
                Selection::KeepBoth => {
                    next.push(parent);
                    next.push(trial);
                }
            }
        }
        pop = truncate(next, n);
        history.push(snapshot(&pop, evaluations));
    }

    Ok(RunResult { algorithm: init.name().to_string(), population: pop, history, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moea::{Bounds, CollectiveInit, RandomInit};
    use std::sync::atomic::{AtomicUsize, Ordering};

    /// f1 = x², f2 = (x - 2)² on [-10, 10]; Pareto set is [0, 2].
    struct SpherePair {
        bounds: Bounds,
        calls: AtomicUsize,
    }

    impl SpherePair {
        fn new() -> Self {
            Self { bounds: Bounds::scalar(-10.0, 10.0).unwrap(), calls: AtomicUsize::new(0) }
        }
    }

    impl Problem for SpherePair {
        fn name(&self) -> &str {
            "sphere-pair"
        }
        fn bounds(&self) -> &Bounds {
            &self.bounds
        }
        fn evaluate(&self, x: &[f64]) -> Objectives {
            self.calls.fetch_add(1, Ordering::Relaxed);
            Objectives::feasible(x[0] * x[0], (x[0] - 2.0).powi(2))
        }
        fn objective_scale(&self) -> [f64; 2] {
            [100.0, 144.0]
        }
    }

    #[test]
    fn population_size_is_constant() {
        let p = SpherePair::new();
        let r = run(&p, &MoeaConfig::default().with_seed(4), &CollectiveInit).unwrap();
        assert!(r.history.iter().all(|h| h.population_size == 100));
        assert_eq!(r.population.len(), 100);
        assert_eq!(r.generations(), 9);
        assert_eq!(r.evaluations, 1000);
    }

    #[test]
    fn evaluation_budget_is_exact() {
        let p = SpherePair::new();
        let cfg = MoeaConfig { fe_max: 1050, ..MoeaConfig::default() };
        let r = run(&p, &cfg, &RandomInit).unwrap();
        assert_eq!(r.evaluations, 1050);
        assert_eq!(p.calls.load(Ordering::Relaxed), 1050);
        assert_eq!(r.history.last().unwrap().evaluations, 1050);
    }

    #[test]
    fn initialization_costs_no_evaluations() {
        let p = SpherePair::new();
        let cfg = MoeaConfig { fe_max: 100, ..MoeaConfig::default() };
        run(&p, &cfg, &CollectiveInit).unwrap();
        assert_eq!(p.calls.load(Ordering::Relaxed), 100);
    }

    #[test]
    fn toy_front_spans_pareto_set() {
        for init in [&RandomInit as &dyn PopulationInit, &CollectiveInit] {
            let p = SpherePair::new();
            let r = run(&p, &MoeaConfig::default().with_seed(1), init).unwrap();
            let xs: Vec<f64> = r.front_solutions().iter().map(|s| s.x[0]).collect();
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(lo.abs() <= 0.05 && (hi - 2.0).abs() <= 0.05, "{}: [{lo}, {hi}]", init.name());
            assert!(xs.iter().all(|x| (-0.05..=2.05).contains(x)));
        }
    }

    #[test]
    fn runs_are_deterministic() {
        for init in [&RandomInit as &dyn PopulationInit, &CollectiveInit] {
            let a = run(&SpherePair::new(), &MoeaConfig::default().with_seed(77), init).unwrap();
            let b = run(&SpherePair::new(), &MoeaConfig::default().with_seed(77), init).unwrap();
            assert_eq!(a.population, b.population);
            assert_eq!(a.history, b.history);
        }
    }

    #[test]
    fn one_dimensional_trial_equals_mutant() {
        let p = SpherePair::new();
        let pop: Vec<Solution> = (0..10).map(|i| evaluate(&p, vec![i as f64 - 5.0])).collect();
        let cfg = MoeaConfig { cr: 0.0, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut shadow = ChaCha8Rng::seed_from_u64(3);
        for i in 0..10 {
            let t = trial_vector(&pop, i, &cfg, &p, &mut rng);
            let [r1, r2, r3] = distinct_others(&mut shadow, 10, i);
            let _: usize = shadow.gen_range(0..1);
            let _: f64 = shadow.gen();
            let mutant = (pop[r1].x[0] + 0.5 * (pop[r2].x[0] - pop[r3].x[0])).clamp(-10.0, 10.0);
            assert_eq!(t[0], mutant);
        }
    }

    #[test]
    fn selection_rules() {
        let feas = Objectives::feasible(1.0, 1.0);
        let infeas = Objectives { f1: 0.0, f2: 0.0, violation: 0.5 };
        assert!(matches!(select(&infeas, &feas), Selection::TakeTrial));
        assert!(matches!(select(&feas, &infeas), Selection::KeepParent));
        assert!(matches!(select(&feas, &feas), Selection::TakeTrial));
        assert!(matches!(select(&feas, &Objectives::feasible(0.5, 2.0)), Selection::KeepBoth));
        assert!(matches!(select(&feas, &Objectives::feasible(2.0, 2.0)), Selection::KeepParent));
        let worse = Objectives { violation: 0.7, ..infeas };
        assert!(matches!(select(&infeas, &worse), Selection::KeepParent));
        assert!(matches!(select(&worse, &infeas), Selection::TakeTrial));
    }
}
