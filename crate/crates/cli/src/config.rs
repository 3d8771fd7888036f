//! Declarative experiment configuration.
//!
//! Configs are TOML (or JSON, which is what reports echo back). Every
//! rational is written as a string — `"3/4"`, `"1"`, `"0.25"` — so ties
//! are never blurred by float parsing.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::RunError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub alphabet: AlphabetSpec,
    pub discount: DiscountSpec,
    #[serde(default)]
    pub tie_break: TieBreakSpec,
    /// Look-ahead depth. Defaults to the lifetime, or to the effective
    /// horizon of `target_eps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_eps: Option<String>,
    /// Seed for randomized policy sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub class: Vec<ClassEntry>,
    pub experiment: ExperimentSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetSpec {
    pub actions: usize,
    /// Defaults to the binary reward set {(0,0), (0,1)}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub percepts: Option<Vec<PerceptSpec>>,
}

impl Default for AlphabetSpec {
    fn default() -> Self {
        AlphabetSpec {
            actions: 2,
            percepts: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerceptSpec {
    pub observation: u32,
    pub reward: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiscountSpec {
    Geometric { gamma: String },
    FiniteLifetime { m: usize },
    Table { values: Vec<String> },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreakSpec {
    #[default]
    Lowest,
    Highest,
    Preference(Vec<u16>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub weight: String,
    pub env: EnvSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvSpec {
    Heaven,
    Hell,
    Gate { lucky: u16 },
    Trap { doomed: u16 },
    Bandit { means: Vec<String> },
    Seqpred { bits: String },
    Seeded {
        seed: u64,
        #[serde(default)]
        deficit: bool,
    },
    /// Mimics the configured class on `policy`, freezes after a deviation.
    Dogmatic { policy: PolicySpec },
    Buddy { script: String, pinned: u16 },
    Mixture { components: Vec<ClassEntry> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySpec {
    Constant { action: u16 },
    /// Open-loop cycle through `actions`.
    Cycle { actions: Vec<u16> },
    /// Histories in `a:e a:e` notation (`ε` for the empty history).
    Table {
        entries: BTreeMap<String, u16>,
        #[serde(default)]
        default: u16,
    },
    /// Sequence predictor that is right on every third bit of `bits`.
    EveryThird { bits: String },
    /// Optimal for the configured class.
    Optimal,
    /// Pessimal for the configured class.
    Pessimal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentSpec {
    Value {
        policy: PolicySpec,
    },
    Optimal {},
    Dogmatic {
        policy: PolicySpec,
        eps: String,
    },
    Indifference {
        m: usize,
    },
    Emulation {
        policy: PolicySpec,
        eps: String,
        /// Environments the transfer bound is checked in; defaults to the
        /// class components.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        test_envs: Vec<EnvSpec>,
    },
    Intelligence {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        policies: Vec<PolicySpec>,
        /// Number of random tabular policies to add.
        #[serde(default)]
        samples: usize,
        /// Table depth of sampled policies; defaults to the horizon.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
        /// Also check the truncation bound at this depth.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncate: Option<usize>,
    },
    Gap {
        lucky: u16,
        gate_weight: String,
        class_weight: String,
        #[serde(default)]
        samples: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
    Stupidity {
        eps: String,
        policy: PolicySpec,
    },
    Pareto {
        depth: usize,
        /// Also run the sweep without buddy environments.
        #[serde(default)]
        control: bool,
        /// Require the control sweep to find a dominated policy.
        #[serde(default)]
        expect_control_dominated: bool,
        /// Verify the buddy gap for every ordered pair.
        #[serde(default = "yes")]
        buddy_gaps: bool,
    },
}

fn yes() -> bool {
    true
}

impl ExperimentSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentSpec::Value { .. } => "value",
            ExperimentSpec::Optimal {} => "optimal",
            ExperimentSpec::Dogmatic { .. } => "dogmatic",
            ExperimentSpec::Indifference { .. } => "indifference",
            ExperimentSpec::Emulation { .. } => "emulation",
            ExperimentSpec::Intelligence { .. } => "intelligence",
            ExperimentSpec::Gap { .. } => "gap",
            ExperimentSpec::Stupidity { .. } => "stupidity",
            ExperimentSpec::Pareto { .. } => "pareto",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// File name stem; defaults to the config file's stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    /// Reads a `.json` config (e.g. a report's echo) or TOML otherwise.
    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|x| x == "json") {
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| RunError::Config(e.to_string()))?;
            // accept a whole report as well as a bare config
            let config = value.get("config").cloned().unwrap_or(value);
            serde_json::from_value(config).map_err(|e| RunError::Config(e.to_string()))
        } else {
            Self::from_toml(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAP: &str = r#"
discount = { kind = "geometric", gamma = "1/2" }
horizon = 3
tie_break = { preference = [1, 0] }

[[class]]
weight = "1/2"
env = { kind = "mixture", components = [{ weight = "1", env = { kind = "gate", lucky = 1 } }] }

[experiment]
kind = "gap"
lucky = 0
gate_weight = "9/10"
class_weight = "1/10"
"#;

    #[test]
    fn toml_and_json_round_trip() {
        let cfg = Config::from_toml(GAP).unwrap();
        assert_eq!(cfg.tie_break, TieBreakSpec::Preference(vec![1, 0]));
        assert_eq!(cfg.experiment.kind(), "gap");
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(Config::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = GAP.replace("lucky = 0", "lucky = 0\nluky = 1");
        let err = Config::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("luky"), "{err}");
    }

    #[test]
    fn defaults() {
        let cfg = Config::from_toml(
            "discount = { kind = \"finite_lifetime\", m = 2 }\n[experiment]\nkind = \"pareto\"\ndepth = 1\n",
        )
        .unwrap();
        assert_eq!(cfg.alphabet, AlphabetSpec::default());
        assert_eq!(cfg.tie_break, TieBreakSpec::Lowest);
        assert!(matches!(cfg.experiment, ExperimentSpec::Pareto { buddy_gaps: true, control: false, .. }));
        assert!(Format::Both.json() && Format::Both.csv() && !Format::Csv.json());
    }
}
