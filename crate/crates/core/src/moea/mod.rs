//! Constrained bi-objective differential evolution (GDE3) with pluggable
//! population initialization.
//!
//! The evolutionary loop is shared; variants differ only in how the first
//! population is drawn. Initializers implement [`PopulationInit`] and are
//! looked up by algorithm name in an [`AlgorithmRegistry`], so `gde3` and
//! `co-gde3` are selected at runtime.

pub mod gde3;
pub mod init;
pub mod opposition;
pub mod sorting;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gde3::{run, HistoryEntry, RunResult};
pub use init::{AlgorithmRegistry, CollectiveInit, PopulationInit, RandomInit};
pub use opposition::{collective_init, opposite, OppositionKind};

/// Box bounds of the decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidInput(format!(
                "bounds need matching non-empty dimensions, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidInput(format!("dimension {d}: need lower < upper, got [{lo}, {hi}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn scalar(lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower], vec![upper])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn center(&self, d: usize) -> f64 {
        0.5 * (self.lower[d] + self.upper[d])
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Objective pair and aggregated constraint violation of one solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objectives {
    pub f1: f64,
    pub f2: f64,
    /// Zero when feasible.
    pub violation: f64,
}

impl Objectives {
    pub fn feasible(f1: f64, f2: f64) -> Self {
        Self { f1, f2, violation: 0.0 }
    }

    /// Marker for solutions whose evaluation failed.
    pub fn failed() -> Self {
        Self { f1: f64::INFINITY, f2: f64::INFINITY, violation: f64::INFINITY }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }

    pub fn pair(&self) -> [f64; 2] {
        [self.f1, self.f2]
    }

    /// Pareto domination on the objective pair.
    pub fn dominates(&self, other: &Self) -> bool {
        self.f1 <= other.f1 && self.f2 <= other.f2 && (self.f1 < other.f1 || self.f2 < other.f2)
    }

    pub fn weakly_dominates(&self, other: &Self) -> bool {
        self.f1 <= other.f1 && self.f2 <= other.f2
    }

    /// Constraint domination: feasible beats infeasible, lower violation
    /// beats higher, and Pareto domination decides between feasible ones.
    pub fn constraint_dominates(&self, other: &Self) -> bool {
        match (self.is_feasible(), other.is_feasible()) {
            (true, false) => true,
            (false, true) => false,
            (false, false) => self.violation < other.violation,
            (true, true) => self.dominates(other),
        }
    }
}

/// A bi-objective minimization problem over a box.
///
/// Evaluation must not fail: problems map internal errors to
/// [`Objectives::failed`] or another infeasible value.
pub trait Problem: Sync {
    fn name(&self) -> &str;

    fn bounds(&self) -> &Bounds;

    fn evaluate(&self, x: &[f64]) -> Objectives;

    /// Objective scales used to normalize fronts for the quality metrics.
    fn objective_scale(&self) -> [f64; 2];
}

/// A decision vector with its evaluation, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objectives: Option<Objectives>,
}

impl Solution {
    pub fn unevaluated(x: Vec<f64>) -> Self {
        Self { x, objectives: None }
    }

    pub fn evaluated(x: Vec<f64>, objectives: Objectives) -> Self {
        Self { x, objectives: Some(objectives) }
    }

    pub fn is_evaluated(&self) -> bool {
        self.objectives.is_some()
    }

    /// Objectives of an evaluated solution. Panics otherwise.
    pub fn obj(&self) -> &Objectives {
        self.objectives.as_ref().expect("solution not evaluated")
    }
}

/// GDE3 control parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoeaConfig {
    /// Crossover rate CR.
    #[serde(default = "default_cr")]
    pub cr: f64,
    /// Scaling factor F.
    #[serde(default = "default_f")]
    pub f: f64,
    #[serde(default = "default_pop")]
    pub pop_size: usize,
    /// Budget of objective evaluations, initial population included.
    #[serde(default = "default_fe")]
    pub fe_max: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_cr() -> f64 {
    0.9
}
fn default_f() -> f64 {
    0.5
}
fn default_pop() -> usize {
    100
}
fn default_fe() -> usize {
    1000
}

impl Default for MoeaConfig {
    fn default() -> Self {
        Self { cr: default_cr(), f: default_f(), pop_size: default_pop(), fe_max: default_fe(), seed: 0 }
    }
}

impl MoeaConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::Config(format!("cr must be in [0, 1], got {}", self.cr)));
        }
        if !(self.f.is_finite() && self.f > 0.0) {
            return Err(Error::Config(format!("f must be > 0, got {}", self.f)));
        }
        if self.pop_size < 5 || self.pop_size % 5 != 0 {
            return Err(Error::Config(format!("pop_size must be a positive multiple of 5, got {}", self.pop_size)));
        }
        if self.fe_max < self.pop_size {
            return Err(Error::Config(format!(
                "fe_max ({}) must be at least pop_size ({})",
                self.fe_max, self.pop_size
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(MoeaConfig::default().validate().is_ok());
        assert!(MoeaConfig { pop_size: 12, ..Default::default() }.validate().is_err());
        assert!(MoeaConfig { cr: 1.5, ..Default::default() }.validate().is_err());
        assert!(MoeaConfig { f: 0.0, ..Default::default() }.validate().is_err());
        assert!(MoeaConfig { fe_max: 50, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn bounds_checks() {
        assert!(Bounds::scalar(1.0, 1.0).is_err());
        assert!(Bounds::new(vec![0.0], vec![]).is_err());
        let b = Bounds::new(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        let mut x = [2.0, -3.0];
        assert!(!b.contains(&x));
        b.clamp(&mut x);
        assert_eq!(x, [1.0, -1.0]);
    }

    #[test]
    fn constraint_domination_order() {
        let feas = Objectives::feasible(1.0, 1.0);
        let worse = Objectives::feasible(2.0, 1.0);
        let inf_lo = Objectives { f1: 0.0, f2: 0.0, violation: 0.1 };
        let inf_hi = Objectives { f1: 0.0, f2: 0.0, violation: 0.5 };
        assert!(feas.constraint_dominates(&inf_lo));
        assert!(!inf_lo.constraint_dominates(&feas));
        assert!(inf_lo.constraint_dominates(&inf_hi));
        assert!(feas.constraint_dominates(&worse));
        assert!(!feas.constraint_dominates(&feas));
    }
}
