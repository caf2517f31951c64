//! JSON configuration: a single document with top-level `problem` and `run`
//! sections. Unknown keys are a hard error.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub problem: ProblemSection,
    pub run: RunSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    /// `[a, b]`
    pub domain: [f64; 2],
    /// coefficient of `u_xxxxt`
    pub epsilon: f64,
    /// flux terms `[[c, p], ...]` with `f(u) = sum c u^(p+1)/(p+1)`
    pub flux: Vec<(f64, u32)>,
    pub initial: BuiltinSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<BuiltinSection>,
    #[serde(rename = "T")]
    pub t_final: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinSection {
    /// `sech_soliton` or `gaussian_pulse`
    pub builtin: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub degree: usize,
    pub elements: Elements,
    pub sigma0: f64,
    pub sigma1: f64,
    pub beta: f64,
    pub dt: DtPolicy,
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
}

fn default_snapshots() -> usize {
    10
}

/// Element count: a single value or a refinement sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elements {
    One(usize),
    Sweep(Vec<usize>),
}

impl Elements {
    pub fn as_list(&self) -> Vec<usize> {
        match self {
            Elements::One(n) => vec![*n],
            Elements::Sweep(v) => v.clone(),
        }
    }
}

/// Time-step policy: an explicit value or `dt = factor * h^(k+1)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DtPolicy {
    Value(f64),
    Scaled(ScaledDt),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledDt {
    pub factor: f64,
}

impl DtPolicy {
    pub fn dt_for(&self, h: f64, degree: usize) -> f64 {
        match self {
            DtPolicy::Value(v) => *v,
            DtPolicy::Scaled(s) => s.factor * h.powi(degree as i32 + 1),
        }
    }
}

impl ConfigFile {
    /// Parses and validates a config document, reporting line/column
    /// positions for syntax and schema errors.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg: ConfigFile = serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!(
                "{}:{}:{}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.problem;
        if !(p.domain[1] > p.domain[0]) {
            return Err(CliError::config(format!(
                "problem.domain: need a < b, got [{}, {}]",
                p.domain[0], p.domain[1]
            )));
        }
        if !(p.epsilon > 0.0) {
            return Err(CliError::config(format!(
                "problem.epsilon: must be positive, got {}",
                p.epsilon
            )));
        }
        if !(p.t_final > 0.0) {
            return Err(CliError::config(format!(
                "problem.T: must be positive, got {}",
                p.t_final
            )));
        }
        let r = &self.run;
        if r.degree > rosenau_core::basis::MAX_DEGREE {
            return Err(CliError::config(format!(
                "run.degree: {} exceeds the supported cap {}",
                r.degree,
                rosenau_core::basis::MAX_DEGREE
            )));
        }
        let elements = r.elements.as_list();
        if elements.is_empty() || elements.iter().any(|&n| n == 0) {
            return Err(CliError::config(
                "run.elements: need positive element counts".to_string(),
            ));
        }
        rosenau_core::operator::PenaltyParams::new(r.sigma0, r.sigma1, r.beta)
            .map_err(|e| CliError::config(format!("run penalties: {e}")))?;
        match r.dt {
            DtPolicy::Value(v) if !(v > 0.0) => {
                return Err(CliError::config(format!(
                    "run.dt.value: must be positive, got {v}"
                )));
            }
            DtPolicy::Scaled(s) if !(s.factor > 0.0) => {
                return Err(CliError::config(format!(
                    "run.dt.scaled.factor: must be positive, got {}",
                    s.factor
                )));
            }
            _ => {}
        }
        Ok(())
    }
}
