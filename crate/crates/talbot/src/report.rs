//! Reports, threshold checks and artifact writing.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::Failure;

/// One CSV file: `header` names the columns of every row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// Shortest round-trip decimal, so CSVs are byte-stable.
pub fn num(x: f64) -> String {
    format!("{x}")
}

fn short(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.3e}")
    } else {
        format!("{x:.4}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub passed: bool,
}

impl Check {
    pub fn within(name: &str, value: f64, min: Option<f64>, max: Option<f64>) -> Self {
        let passed = value.is_finite() && min.is_none_or(|m| value >= m) && max.is_none_or(|m| value <= m);
        Self {
            name: name.into(),
            value,
            min,
            max,
            passed,
        }
    }

    pub fn at_most(name: &str, value: f64, max: f64) -> Self {
        Self::within(name, value, None, Some(max))
    }

    pub fn at_least(name: &str, value: f64, min: f64) -> Self {
        Self::within(name, value, Some(min), None)
    }

    pub fn describe(&self) -> String {
        let range = match (self.min, self.max) {
            (Some(a), Some(b)) => format!("in [{}, {}]", short(a), short(b)),
            (Some(a), None) => format!(">= {}", short(a)),
            (None, Some(b)) => format!("<= {}", short(b)),
            (None, None) => "recorded".into(),
        };
        format!("{} = {} ({range})", self.name, short(self.value))
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub subcommand: String,
    pub tables: Vec<Table>,
    pub summary: Value,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(subcommand: &str) -> Self {
        Self {
            subcommand: subcommand.into(),
            tables: Vec::new(),
            summary: json!({}),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn json(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "passed": self.passed(),
            "summary": self.summary,
            "checks": self.checks,
            "notes": self.notes,
        })
    }

    /// Writes `<table>.csv`, `<subcommand>.json` and `manifest.json` into
    /// `dir`. Only the manifest carries a timestamp.
    pub fn write(&self, config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>, Failure> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for t in &self.tables {
            let p = dir.join(format!("{}.csv", t.name));
            std::fs::write(&p, t.to_csv()?)?;
            written.push(p);
        }
        let p = dir.join(format!("{}.json", self.subcommand));
        std::fs::write(&p, pretty(&self.json()))?;
        written.push(p);
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let manifest = json!({
            "tool": "talbot",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "seed": config.seed,
            "config": config,
            "artifacts": written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
            "passed": self.passed(),
            "unix_time": stamp,
        });
        let p = dir.join("manifest.json");
        std::fs::write(&p, pretty(&manifest))?;
        written.push(p);
        Ok(written)
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}
