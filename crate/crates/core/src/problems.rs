//! Optimization problems selectable by name.

use std::collections::BTreeMap;

use crate::config::PlanConfig;
use crate::error::{Error, Result};
use crate::moea::{Bounds, Objectives, Problem};
use crate::motop::MotopProblem;

/// `f1 = x²`, `f2 = (x - 2)²` on `[-10, 10]`. The Pareto set is `[0, 2]`.
#[derive(Debug, Clone)]
pub struct SpherePair {
    bounds: Bounds,
}

impl Default for SpherePair {
    fn default() -> Self {
        Self { bounds: Bounds::scalar(-10.0, 10.0).expect("valid bounds") }
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
        Objectives::feasible(x[0] * x[0], (x[0] - 2.0).powi(2))
    }

    /// Largest objective values over the bounds.
    fn objective_scale(&self) -> [f64; 2] {
        [100.0, 144.0]
    }
}

type Factory = fn(&PlanConfig) -> Result<Box<dyn Problem>>;

/// Problem name to constructor lookup.
pub struct ProblemRegistry {
    entries: BTreeMap<&'static str, Factory>,
}

fn motop(cfg: &PlanConfig, trolley: bool) -> Result<Box<dyn Problem>> {
    if cfg.operation.is_trolley() != trolley {
        return Err(Error::Config(format!("problem '{}' does not match the configured operation kind", cfg.problem)));
    }
    Ok(Box::new(MotopProblem::new(cfg.operation, cfg.limits, cfg.crane, cfg.sampling, cfg.metrics.f2_cap)?))
}

impl ProblemRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, name: &'static str, factory: Factory) {
        self.entries.insert(name, factory);
    }

    pub fn build(&self, name: &str, cfg: &PlanConfig) -> Result<Box<dyn Problem>> {
        let factory = self.entries.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.entries.keys().copied().collect();
            Error::Config(format!("unknown problem '{name}' (known: {})", known.join(", ")))
        })?;
        factory(cfg)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for ProblemRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("t-motop", |c| motop(c, true));
        r.register("s-motop", |c| motop(c, false));
        r.register("sphere-pair", |_| Ok(Box::new(SpherePair::default())));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_by_name() {
        let r = ProblemRegistry::default();
        let t = PlanConfig::reference_trolley();
        assert_eq!(r.build("t-motop", &t).unwrap().name(), "t-motop");
        assert_eq!(r.build("sphere-pair", &t).unwrap().name(), "sphere-pair");
        assert!(r.build("s-motop", &t).is_err());
        assert!(r.build("zdt1", &t).is_err());
        assert_eq!(r.build("s-motop", &PlanConfig::reference_slew()).unwrap().objective_scale(), [8.0, 2.0]);
    }
}
