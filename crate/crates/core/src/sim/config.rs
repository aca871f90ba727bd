use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{NavError, Result};

fn default_dt() -> f64 {
    0.1
}

fn default_duration() -> f64 {
    60.0
}

/// One scenario run. `params` overrides demo-specific defaults by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub demo: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl ScenarioConfig {
    pub fn new(demo: &str, seed: u64) -> Self {
        ScenarioConfig {
            demo: demo.to_string(),
            seed,
            dt: default_dt(),
            duration: default_duration(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| NavError::invalid(format!("bad scenario config: {e}")))
    }

    /// Accepts either a single config object or an array of them.
    pub fn batch_from_json(text: &str) -> Result<Vec<Self>> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| NavError::invalid(format!("bad batch file: {e}")))?;
        let parsed = if value.is_array() {
            serde_json::from_value(value)
        } else {
            serde_json::from_value(value).map(|c| vec![c])
        };
        parsed.map_err(|e| NavError::invalid(format!("bad batch file: {e}")))
    }

    /// Checks the generic fields; demo names and params are checked by the runner.
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(NavError::invalid(format!(
                "dt = {} must be positive",
                self.dt
            )));
        }
        if !(self.duration >= self.dt) || !self.duration.is_finite() {
            return Err(NavError::invalid(format!(
                "duration {} must be at least dt",
                self.duration
            )));
        }
        if let Some((k, v)) = self.params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(NavError::invalid(format!("param {k} = {v} is not finite")));
        }
        Ok(())
    }

    /// Number of simulation steps, duration / dt rounded to nearest.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    /// Output file stem, e.g. `ekf_localization_seed1`.
    pub fn stem(&self) -> String {
        format!("{}_seed{}", self.demo, self.seed)
    }
}
