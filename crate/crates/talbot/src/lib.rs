#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Experiment driver for `talbot-core`: spec-string grammars, TOML configs,
//! CSV/JSON artifacts with run manifests, the CLI subcommands and the
//! acceptance suite.

pub mod acceptance;
pub mod config;
pub mod experiments;
pub mod grammar;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] talbot_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<grammar::ParseError> for Failure {
    fn from(e: grammar::ParseError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl Failure {
    /// 2 for bad input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) | Failure::Core(talbot_core::Error::Domain(_)) => 2,
            Failure::Core(talbot_core::Error::UnsupportedSlice(_) | talbot_core::Error::DegenerateFit) => 2,
            _ => 1,
        }
    }
}

/// Installs the global rayon pool, capped by `TALBOT_THREADS` when set.
pub fn init_threads() {
    if let Some(n) = std::env::var("TALBOT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A pool may already exist (tests); the cap then applies to that run only.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}
