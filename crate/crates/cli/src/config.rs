use std::path::Path;

use macroreal::mrconds::Family;
use macroreal::scan::{MaximizeOptions, ParamRange, ScenarioSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Evaluate,
    Nsit,
    FineAudit,
    Sweep,
    Maximize,
}

/// Seeded batch of scenarios built from `scenario` as a template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchSpec {
    pub count: usize,
    #[serde(default)]
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: ScenarioSpec,
    /// Defaults to every family applicable to the scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<Family>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<ParamRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch: Option<BatchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximize: Option<MaximizeOptions>,
    /// Satisfaction tolerance; `--tol` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        let needs_params = matches!(self.command, Command::Sweep | Command::Maximize);
        if needs_params && self.params.is_empty() {
            return Err(CliError::Config("`params` is required for sweep and maximize".into()));
        }
        if !needs_params && !self.params.is_empty() {
            return Err(CliError::Config("`params` is only used by sweep and maximize".into()));
        }
        if self.command == Command::FineAudit && self.batch.is_none() {
            return Err(CliError::Config("`batch` is required for fine-audit".into()));
        }
        if self.command != Command::FineAudit && self.batch.is_some() {
            return Err(CliError::Config("`batch` is only used by fine-audit".into()));
        }
        if self.command != Command::Maximize && self.maximize.is_some() {
            return Err(CliError::Config("`maximize` is only used by maximize".into()));
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Config(format!("`tolerance` must be finite and nonnegative, got {t}")));
            }
        }
        Ok(())
    }
}
