//! Human-editable JSON configuration for simulation batches.
//!
//! The document layer ([`ConfigDoc`]) mirrors the JSON schema one-to-one
//! and is strict: unknown fields are rejected, and every validation error
//! names the offending field and the violated constraint. Band numbering
//! is 1-based in documents (band 1 is the first list entry); internally
//! arms are 0-based.
//!
//! ```json
//! {
//!   "bands": [
//!     { "kind": "markov", "p10": 0.1, "p01": 0.2, "r_idle": 1.0, "r_busy": 0.1 },
//!     { "kind": "bernoulli", "p_idle": 0.3 }
//!   ],
//!   "policy": { "kind": "dsee", "d": 10.0 },
//!   "horizon": 100000,
//!   "runs": 1000,
//!   "seed": 42
//! }
//! ```
//!
//! Optional pieces: per-band `init` (`"stationary"` default, `"fixed_idle"`,
//! `"fixed_busy"`), `r_idle` (default 1.0), `r_busy` (default 0.0), a
//! `record` block (`points_per_decade`, `choices`), `"d": "log_time"` for
//! the self-scaling exploration budget, and `"band"` (1-based) to pin the
//! oracle to a specific band instead of the best one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{BandModel, InitMode, Occupancy};
use crate::policy::{DseeBudget, PolicyKind};
use crate::sim::{ChoiceLogging, RecordOptions, SimulationConfig};

/// Errors from parsing or validating configuration documents.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {field}: {constraint}")]
    Invalid { field: String, constraint: String },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            constraint: constraint.into(),
        }
    }
}

fn default_r_idle() -> f64 {
    1.0
}

/// Occupancy kind selector of a band entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandKindSpec {
    Bernoulli,
    Markov,
}

/// Initial-state rule of a band entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitSpec {
    #[default]
    Stationary,
    FixedIdle,
    FixedBusy,
}

impl From<InitSpec> for InitMode {
    fn from(spec: InitSpec) -> Self {
        match spec {
            InitSpec::Stationary => InitMode::Stationary,
            InitSpec::FixedIdle => InitMode::FixedIdle,
            InitSpec::FixedBusy => InitMode::FixedBusy,
        }
    }
}

impl From<InitMode> for InitSpec {
    fn from(mode: InitMode) -> Self {
        match mode {
            InitMode::Stationary => InitSpec::Stationary,
            InitMode::FixedIdle => InitSpec::FixedIdle,
            InitMode::FixedBusy => InitSpec::FixedBusy,
        }
    }
}

/// One band entry: kind plus kind-specific probability fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSpec {
    pub kind: BandKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_idle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p10: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p01: Option<f64>,
    #[serde(default = "default_r_idle")]
    pub r_idle: f64,
    #[serde(default)]
    pub r_busy: f64,
    #[serde(default)]
    pub init: InitSpec,
}

impl BandSpec {
    fn build(&self, index: usize) -> Result<BandModel, ConfigError> {
        let path = |name: &str| format!("bands[{index}].{name}");
        let probability = |name: &str, value: f64| -> Result<f64, ConfigError> {
            if (0.0..=1.0).contains(&value) {
                Ok(value)
            } else {
                Err(ConfigError::invalid(
                    path(name),
                    format!("= {value}: must lie in [0, 1]"),
                ))
            }
        };
        let require = |name: &str, value: Option<f64>| -> Result<f64, ConfigError> {
            value.ok_or_else(|| {
                ConfigError::invalid(path(name), format!("required for kind \"{:?}\"", self.kind))
            })
        };
        let forbid = |name: &str, value: Option<f64>| -> Result<(), ConfigError> {
            if value.is_some() {
                Err(ConfigError::invalid(
                    path(name),
                    format!("not a field of kind \"{:?}\"", self.kind),
                ))
            } else {
                Ok(())
            }
        };

        let r_idle = probability("r_idle", self.r_idle)?;
        let r_busy = probability("r_busy", self.r_busy)?;
        let occupancy = match self.kind {
            BandKindSpec::Bernoulli => {
                forbid("p10", self.p10)?;
                forbid("p01", self.p01)?;
                let p_idle = probability("p_idle", require("p_idle", self.p_idle)?)?;
                Occupancy::Bernoulli { p_idle }
            }
            BandKindSpec::Markov => {
                forbid("p_idle", self.p_idle)?;
                let p10 = probability("p10", require("p10", self.p10)?)?;
                let p01 = probability("p01", require("p01", self.p01)?)?;
                if p10 + p01 <= 0.0 {
                    return Err(ConfigError::invalid(
                        format!("bands[{index}]"),
                        "p10 + p01 must be > 0 for a unique stationary distribution",
                    ));
                }
                Occupancy::Markov { p10, p01 }
            }
        };
        Ok(BandModel {
            occupancy,
            r_idle,
            r_busy,
            init: self.init.into(),
        })
    }

    fn from_model(model: &BandModel) -> Self {
        match model.occupancy {
            Occupancy::Bernoulli { p_idle } => Self {
                kind: BandKindSpec::Bernoulli,
                p_idle: Some(p_idle),
                p10: None,
                p01: None,
                r_idle: model.r_idle,
                r_busy: model.r_busy,
                init: model.init.into(),
            },
            Occupancy::Markov { p10, p01 } => Self {
                kind: BandKindSpec::Markov,
                p_idle: None,
                p10: Some(p10),
                p01: Some(p01),
                r_idle: model.r_idle,
                r_busy: model.r_busy,
                init: model.init.into(),
            },
        }
    }
}

/// Policy kind selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKindSpec {
    Proposed,
    Ucb1,
    Dsee,
    Oracle,
}

/// Exploration budget entry: a number or the string `"log_time"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BudgetSpec {
    Value(f64),
    Name(String),
}

/// Policy block of a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub kind: PolicyKindSpec,
    /// Exploration budget; dsee only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<BudgetSpec>,
    /// 1-based band the oracle plays; oracle only, default best band.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<u64>,
}

impl PolicySpec {
    fn build(&self, n_bands: usize) -> Result<PolicyKind, ConfigError> {
        if self.kind != PolicyKindSpec::Dsee && self.d.is_some() {
            return Err(ConfigError::invalid(
                "policy.d",
                format!("not a field of kind \"{:?}\"", self.kind),
            ));
        }
        if self.kind != PolicyKindSpec::Oracle && self.band.is_some() {
            return Err(ConfigError::invalid(
                "policy.band",
                format!("not a field of kind \"{:?}\"", self.kind),
            ));
        }
        match self.kind {
            PolicyKindSpec::Proposed => Ok(PolicyKind::Proposed),
            PolicyKindSpec::Ucb1 => Ok(PolicyKind::Ucb1),
            PolicyKindSpec::Dsee => {
                let budget = match self.d.as_ref().ok_or_else(|| {
                    ConfigError::invalid("policy.d", "required for kind \"Dsee\"")
                })? {
                    BudgetSpec::Value(d) => {
                        if d.is_finite() && *d >= 0.0 {
                            DseeBudget::Constant(*d)
                        } else {
                            return Err(ConfigError::invalid(
                                "policy.d",
                                format!("= {d}: must be a finite value >= 0"),
                            ));
                        }
                    }
                    BudgetSpec::Name(name) if name == "log_time" => DseeBudget::LogTime,
                    BudgetSpec::Name(name) => {
                        return Err(ConfigError::invalid(
                            "policy.d",
                            format!("= \"{name}\": expected a number or \"log_time\""),
                        ));
                    }
                };
                Ok(PolicyKind::Dsee { budget })
            }
            PolicyKindSpec::Oracle => {
                let arm = match self.band {
                    None => None,
                    Some(band) => {
                        if band >= 1 && band <= n_bands as u64 {
                            Some((band - 1) as usize)
                        } else {
                            return Err(ConfigError::invalid(
                                "policy.band",
                                format!("= {band}: must lie in 1..={n_bands}"),
                            ));
                        }
                    }
                };
                Ok(PolicyKind::Oracle { arm })
            }
        }
    }

    fn from_kind(kind: &PolicyKind) -> Self {
        match *kind {
            PolicyKind::Proposed => Self {
                kind: PolicyKindSpec::Proposed,
                d: None,
                band: None,
            },
            PolicyKind::Ucb1 => Self {
                kind: PolicyKindSpec::Ucb1,
                d: None,
                band: None,
            },
            PolicyKind::Dsee { budget } => Self {
                kind: PolicyKindSpec::Dsee,
                d: Some(match budget {
                    DseeBudget::Constant(d) => BudgetSpec::Value(d),
                    DseeBudget::LogTime => BudgetSpec::Name("log_time".into()),
                }),
                band: None,
            },
            PolicyKind::Oracle { arm } => Self {
                kind: PolicyKindSpec::Oracle,
                d: None,
                band: arm.map(|a| a as u64 + 1),
            },
        }
    }
}

/// Choice-logging selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ChoicesSpec {
    #[default]
    Auto,
    On,
    Off,
}

impl From<ChoicesSpec> for ChoiceLogging {
    fn from(spec: ChoicesSpec) -> Self {
        match spec {
            ChoicesSpec::Auto => ChoiceLogging::Auto,
            ChoicesSpec::On => ChoiceLogging::On,
            ChoicesSpec::Off => ChoiceLogging::Off,
        }
    }
}

impl From<ChoiceLogging> for ChoicesSpec {
    fn from(logging: ChoiceLogging) -> Self {
        match logging {
            ChoiceLogging::Auto => ChoicesSpec::Auto,
            ChoiceLogging::On => ChoicesSpec::On,
            ChoiceLogging::Off => ChoicesSpec::Off,
        }
    }
}

/// Trace recording block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RecordSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_per_decade: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choices: Option<ChoicesSpec>,
}

impl RecordSpec {
    fn build(&self) -> Result<RecordOptions, ConfigError> {
        let defaults = RecordOptions::default();
        let points_per_decade = match self.points_per_decade {
            None => defaults.points_per_decade,
            Some(0) => {
                return Err(ConfigError::invalid(
                    "record.points_per_decade",
                    "must be >= 1",
                ))
            }
            Some(ppd) => ppd,
        };
        Ok(RecordOptions {
            points_per_decade,
            choices: self.choices.unwrap_or_default().into(),
        })
    }
}

/// Top-level configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub bands: Vec<BandSpec>,
    pub policy: PolicySpec,
    pub horizon: u64,
    pub runs: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<RecordSpec>,
}

impl ConfigDoc {
    /// Validate the document and produce a runnable configuration.
    pub fn build(&self) -> Result<SimulationConfig, ConfigError> {
        if self.bands.is_empty() {
            return Err(ConfigError::invalid("bands", "must list at least one band"));
        }
        let bands: Vec<BandModel> = self
            .bands
            .iter()
            .enumerate()
            .map(|(i, spec)| spec.build(i))
            .collect::<Result<_, _>>()?;
        let policy = self.policy.build(bands.len())?;
        if self.horizon < bands.len() as u64 {
            return Err(ConfigError::invalid(
                "horizon",
                format!(
                    "= {}: must be at least the number of bands ({})",
                    self.horizon,
                    bands.len()
                ),
            ));
        }
        if self.runs == 0 {
            return Err(ConfigError::invalid("runs", "must be >= 1"));
        }
        let record = self.record.unwrap_or_default().build()?;
        Ok(SimulationConfig {
            bands,
            policy,
            horizon: self.horizon,
            runs: self.runs,
            master_seed: self.seed,
            record,
        })
    }

    /// Canonical document for a configuration (all optional blocks spelled
    /// out), suitable for manifests and round-trips.
    pub fn from_config(config: &SimulationConfig) -> Self {
        Self {
            bands: config.bands.iter().map(BandSpec::from_model).collect(),
            policy: PolicySpec::from_kind(&config.policy),
            horizon: config.horizon,
            runs: config.runs,
            seed: config.master_seed,
            record: Some(RecordSpec {
                points_per_decade: Some(config.record.points_per_decade),
                choices: Some(config.record.choices.into()),
            }),
        }
    }

    /// Pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config documents always serialize")
    }
}

/// Parse and validate a JSON configuration document.
pub fn parse_config(text: &str) -> Result<SimulationConfig, ConfigError> {
    let doc: ConfigDoc = serde_json::from_str(text)?;
    doc.build()
}
