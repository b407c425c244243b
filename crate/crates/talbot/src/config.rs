//! Experiment configuration, stored as TOML.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use talbot_core::dispersion::DispersionRelation;
use talbot_core::evolution::SliceSpec;
use talbot_core::initial_data::StepFunction;

use crate::grammar::{parse_datum, parse_relation, parse_slice, ParseError};
use crate::Failure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub relation: String,
    pub datum: String,
    pub slice: String,
    /// Dyadic scales `N` for sweeps and counts.
    #[serde(default)]
    pub scales: Vec<u64>,
    pub grid: Option<usize>,
    pub truncation: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Named pass/fail limits, e.g. `slope_max`.
    #[serde(default)]
    pub thresholds: BTreeMap<String, f64>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("talbot-out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            relation: "poly:-1,0,0".into(),
            datum: "step:0,pi".into(),
            slice: "horiz:kl:sqrt2".into(),
            scales: Vec::new(),
            grid: None,
            truncation: None,
            seed: 0,
            thresholds: BTreeMap::new(),
            output: default_output(),
        }
    }
}

/// The config with every spec string parsed.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub relation: DispersionRelation,
    pub datum: StepFunction,
    pub slice: SliceSpec,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, Failure> {
        toml::from_str(text).map_err(|e| Failure::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<Resolved, ParseError> {
        Ok(Resolved {
            relation: parse_relation(&self.relation)?,
            datum: parse_datum(&self.datum)?,
            slice: parse_slice(&self.slice)?,
        })
    }

    pub fn threshold(&self, name: &str) -> Option<f64> {
        self.thresholds.get(name).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig {
            scales: vec![256, 512],
            grid: Some(1 << 18),
            ..ExperimentConfig::default()
        };
        c.thresholds.insert("slope_max".into(), 0.85);
        c.thresholds.insert("tiny".into(), 1e-300);
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml("relation = \"bo\"\ndatum = \"step:0\"\nslice = \"horiz:0\"\ncolour = 1").is_err());
    }
}
