//! JSON run configuration.
//!
//! Physical quantities are SI. Angles are given in degrees under keys ending
//! in `_deg` and converted to radians on load. Every section and field is
//! optional and defaults to the scale-model study.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{CraneParams, SnapConvention};
use crate::moea::MoeaConfig;
use crate::motop::{OperationSpec, SamplingConfig, StateLimits};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct CraneSection {
    hook_mass: f64,
    payload_mass: f64,
    rig_length: f64,
    gravity: f64,
    convention: SnapConvention,
}

impl Default for CraneSection {
    fn default() -> Self {
        let p = CraneParams::scale_model();
        Self {
            hook_mass: p.hook_mass,
            payload_mass: p.payload_mass,
            rig_length: p.rig_length,
            gravity: p.gravity,
            convention: p.convention,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum OperationSection {
    Trolley {
        start: f64,
        end: f64,
        #[serde(default = "default_hoist")]
        hoist_length: f64,
        #[serde(default = "default_t_max")]
        t_max: f64,
    },
    Slew {
        start_deg: f64,
        end_deg: f64,
        jib_radius: f64,
        #[serde(default = "default_hoist")]
        hoist_length: f64,
        #[serde(default = "default_t_max")]
        t_max: f64,
    },
}

fn default_hoist() -> f64 {
    3.0
}
fn default_t_max() -> f64 {
    8.0
}

impl Default for OperationSection {
    fn default() -> Self {
        OperationSection::Trolley { start: 1.0, end: 2.0, hoist_length: default_hoist(), t_max: default_t_max() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct LimitsSection {
    trolley_velocity: f64,
    trolley_acceleration: f64,
    slew_rate_deg: f64,
    slew_acceleration_deg: f64,
    hook_radial_deg: f64,
    hook_tangential_deg: f64,
    payload_radial_deg: f64,
    payload_tangential_deg: f64,
}

impl Default for LimitsSection {
    fn default() -> Self {
        Self {
            trolley_velocity: 0.5,
            trolley_acceleration: 0.5,
            slew_rate_deg: 20.0,
            slew_acceleration_deg: 20.0,
            hook_radial_deg: 2.5,
            hook_tangential_deg: 2.5,
            payload_radial_deg: 2.5,
            payload_tangential_deg: 2.5,
        }
    }
}

impl LimitsSection {
    fn to_limits(&self) -> StateLimits {
        StateLimits {
            trolley_velocity: self.trolley_velocity,
            trolley_acceleration: self.trolley_acceleration,
            slew_rate: self.slew_rate_deg.to_radians(),
            slew_acceleration: self.slew_acceleration_deg.to_radians(),
            hook_radial: self.hook_radial_deg.to_radians(),
            hook_tangential: self.hook_tangential_deg.to_radians(),
            payload_radial: self.payload_radial_deg.to_radians(),
            payload_tangential: self.payload_tangential_deg.to_radians(),
        }
    }
}

/// Indicator settings.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsConfig {
    /// Effort normalization for the hyperarea box.
    pub f2_cap: f64,
    /// Relative hyperarea tolerance for the convergence count.
    pub epsilon: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self { f2_cap: 2.0, epsilon: 0.01 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    crane: CraneSection,
    #[serde(default)]
    operation: OperationSection,
    #[serde(default)]
    limits: LimitsSection,
    #[serde(default)]
    moea: MoeaConfig,
    #[serde(default)]
    sampling: SamplingConfig,
    #[serde(default)]
    metrics: MetricsConfig,
    #[serde(default = "default_algorithm")]
    algorithm: String,
    #[serde(default)]
    problem: Option<String>,
    #[serde(default = "default_runs")]
    runs: usize,
    #[serde(default = "default_sweep_step")]
    sweep_step: f64,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

fn default_algorithm() -> String {
    "co-gde3".into()
}
fn default_runs() -> usize {
    25
}
fn default_sweep_step() -> f64 {
    0.01
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanConfig {
    pub crane: CraneParams,
    pub operation: OperationSpec,
    pub limits: StateLimits,
    pub moea: MoeaConfig,
    pub sampling: SamplingConfig,
    pub metrics: MetricsConfig,
    pub algorithm: String,
    /// Registered problem name; `t-motop` or `s-motop` follows the operation.
    pub problem: String,
    pub runs: usize,
    pub sweep_step: f64,
    pub output_dir: Option<PathBuf>,
}

impl PlanConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Trolley study with every default.
    pub fn reference_trolley() -> Self {
        Self::from_json_str("{}").expect("defaults are valid")
    }

    /// Slew study with every default.
    pub fn reference_slew() -> Self {
        Self::from_json_str(r#"{"operation": {"kind": "slew", "start_deg": 30, "end_deg": 60, "jib_radius": 1.0}}"#)
            .expect("defaults are valid")
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let (operation, hoist_length) = match raw.operation {
            OperationSection::Trolley { start, end, hoist_length, t_max } => {
                (OperationSpec::trolley(start, end, t_max), hoist_length)
            }
            OperationSection::Slew { start_deg, end_deg, jib_radius, hoist_length, t_max } => {
                (OperationSpec::slew(start_deg.to_radians(), end_deg.to_radians(), jib_radius, t_max), hoist_length)
            }
        };
        let c = raw.crane;
        let crane = CraneParams {
            hook_mass: c.hook_mass,
            payload_mass: c.payload_mass,
            hoist_length,
            rig_length: c.rig_length,
            gravity: c.gravity,
            convention: c.convention,
        };
        crane.validate().map_err(|e| Error::Config(e.to_string()))?;
        operation.validate()?;
        let limits = raw.limits.to_limits();
        limits.validate(true)?;
        raw.moea.validate()?;
        raw.sampling.validate()?;
        if raw.sampling.t_floor >= operation.t_max {
            return Err(Error::Config(format!(
                "t_floor {} must be below t_max {}",
                raw.sampling.t_floor, operation.t_max
            )));
        }
        if !(raw.metrics.f2_cap.is_finite() && raw.metrics.f2_cap > 0.0) {
            return Err(Error::Config(format!("f2_cap must be > 0, got {}", raw.metrics.f2_cap)));
        }
        if !(0.0..1.0).contains(&raw.metrics.epsilon) {
            return Err(Error::Config(format!("epsilon must be in [0, 1), got {}", raw.metrics.epsilon)));
        }
        if !(raw.sweep_step.is_finite() && raw.sweep_step > 0.0) {
            return Err(Error::Config(format!("sweep_step must be > 0, got {}", raw.sweep_step)));
        }
        if raw.runs < 2 {
            return Err(Error::Config(format!("runs must be >= 2, got {}", raw.runs)));
        }
        let problem =
            raw.problem.unwrap_or_else(|| if operation.is_trolley() { "t-motop" } else { "s-motop" }.to_string());
        Ok(Self {
            crane,
            operation,
            limits,
            moea: raw.moea,
            sampling: raw.sampling,
            metrics: raw.metrics,
            algorithm: raw.algorithm,
            problem,
            runs: raw.runs,
            sweep_step: raw.sweep_step,
            output_dir: raw.output_dir,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_scale_model() {
        let c = PlanConfig::reference_trolley();
        assert_eq!(c.crane, CraneParams::scale_model());
        assert_eq!(c.operation, OperationSpec::reference_trolley());
        assert_eq!(c.limits, StateLimits::scale_model());
        assert_eq!(c.moea, MoeaConfig::default());
        assert_eq!(c.problem, "t-motop");
        assert_eq!(c.algorithm, "co-gde3");
    }

    #[test]
    fn degrees_converted() {
        let c = PlanConfig::reference_slew();
        assert_eq!(c.operation, OperationSpec::reference_slew());
        assert_eq!(c.problem, "s-motop");
        let c = PlanConfig::from_json_str(r#"{"limits": {"hook_radial_deg": 1.0}}"#).unwrap();
        assert_eq!(c.limits.hook_radial, 1f64.to_radians());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "{",
            r#"{"unknown": 1}"#,
            r#"{"limits": {"hook_radial": 0.01}}"#,
            r#"{"limits": {"hook_radial_deg": 6.0}}"#,
            r#"{"crane": {"hook_mass": -1}}"#,
            r#"{"operation": {"kind": "slew", "start_deg": 0.5, "end_deg": 60, "jib_radius": 1}}"#,
            r#"{"operation": {"kind": "hoist"}}"#,
            r#"{"moea": {"pop_size": 7}}"#,
            r#"{"sampling": {"n_samples": 2000}}"#,
            r#"{"runs": 1}"#,
        ] {
            assert!(matches!(PlanConfig::from_json_str(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn convention_key() {
        let c = PlanConfig::from_json_str(r#"{"crane": {"convention": "ode_consistent"}}"#).unwrap();
        assert_eq!(c.crane.convention, SnapConvention::OdeConsistent);
    }
}
