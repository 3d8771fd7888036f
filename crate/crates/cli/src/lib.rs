//! Config-driven experiment runner for `priorlab`.
//!
//! A config names an alphabet, a discount schedule, a weighted environment
//! class and one experiment; [`run`] executes it and returns a [`Report`]
//! whose checks decide the process exit status.

pub mod config;
pub mod experiments;
pub mod report;
pub mod setup;
pub mod zoo;

use std::time::Instant;

pub use config::{Config, Format};
pub use report::{Check, Report, Row};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {error}")]
    Core {
        context: String,
        error: priorlab::Error,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    /// 1 when the library itself reports a falsified construction, 2 for
    /// configuration and environment problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core {
                error: priorlab::Error::BuddyGapMismatch { .. },
                ..
            } => 1,
            _ => 2,
        }
    }
}

/// Runs the configured experiment. `seed`, when given, replaces the
/// config's seed, and the report echoes the effective value.
pub fn run(config: &Config, seed: Option<u64>) -> Result<Report, RunError> {
    let start = Instant::now();
    let mut config = config.clone();
    if seed.is_some() {
        config.seed = seed;
    }
    let setup = setup::Setup::from_config(&config)?;
    let findings = experiments::run(&setup, &config.experiment)?;
    let status = if findings.checks.iter().all(|c| c.holds) {
        "pass"
    } else {
        "fail"
    };
    Ok(Report {
        tool: "priorlab",
        version: env!("CARGO_PKG_VERSION"),
        experiment: config.experiment.kind(),
        status,
        horizon: setup.horizon,
        discount: setup.schedule.to_string(),
        checks: findings.checks,
        rows: findings.rows,
        details: findings.details,
        config,
        timing: report::Timing {
            elapsed_ms: start.elapsed().as_millis(),
        },
        tables: findings.tables,
    })
}

/// Like [`run`], on a dedicated pool of `jobs` worker threads.
pub fn run_with_jobs(config: &Config, seed: Option<u64>, jobs: usize) -> Result<Report, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| RunError::Io(e.to_string()))?;
    pool.install(|| run(config, seed))
}
