//! Configuration-driven experiment runner for the zeroth-order block
//! coordinate solvers.
//!
//! A TOML file names a test problem, a solver and its schedules (explicit or
//! derived from the corollary rules), a replication count and optional
//! two-phase settings. [`run_experiment`] resolves it, runs the replications
//! on a worker pool and writes `manifest.json`, one `trajectory_<seed>.csv`
//! per seed and `summary.json`. Output bytes depend only on the config.

use std::path::{Path, PathBuf};

pub mod config;
pub mod output;
pub mod resolve;
pub mod runner;

pub use config::ExperimentConfig;
pub use output::Summary;
pub use resolve::{resolve, Resolved};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 1,
            BenchError::Runtime(_) => 2,
            BenchError::Check(_) => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    /// Output directory; falls back to the config's `output_dir`, then `./out`.
    pub out: Option<PathBuf>,
    /// Replaces `replications`.
    pub seeds: Option<usize>,
    pub jobs: usize,
    pub check: bool,
    pub gnuplot_stub: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self { out: None, seeds: None, jobs: 1, check: false, gnuplot_stub: false }
    }
}

/// Parses and resolves a config without running it.
pub fn load(path: &Path, seeds: Option<usize>) -> Result<Resolved, BenchError> {
    let (mut cfg, src) = ExperimentConfig::load(path)?;
    if let Some(s) = seeds {
        cfg.replications = s;
    }
    resolve(cfg, &src)
}

/// Runs a resolved experiment and writes its outputs.
///
/// Seeds that fail are recorded in the summary and the others still run; the
/// result is then a runtime error. Under `check`, a failed bound comparison or
/// call-accounting mismatch is a check error.
pub fn execute(r: &Resolved, opts: &Options) -> Result<(PathBuf, Summary), BenchError> {
    let dir = opts.out.clone().or_else(|| r.config.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let outcomes = runner::run_all(r, opts.jobs)?;
    let summary = output::summarize(r, &outcomes);
    output::write_all(&dir, r, &outcomes, &summary)?;
    if opts.gnuplot_stub {
        let path = dir.join("plot.gp");
        std::fs::write(&path, output::gnuplot_stub(r, &outcomes))
            .map_err(|e| BenchError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(f) = summary.failures.first() {
        return Err(BenchError::Runtime(format!(
            "{} of {} seeds failed; first, seed {}: {}",
            summary.failures.len(),
            summary.replications,
            f.seed,
            f.error
        )));
    }
    if opts.check && !summary.checks_pass() {
        let failed: Vec<&str> = summary.bounds.iter().filter(|b| b.pass == Some(false)).map(|b| b.id).collect();
        return Err(BenchError::Check(if failed.is_empty() {
            "oracle call accounting mismatch".into()
        } else {
            format!("empirical mean exceeds bound {}", failed.join(", "))
        }));
    }
    Ok((dir, summary))
}

pub fn run_experiment(config: &Path, opts: &Options) -> Result<(PathBuf, Summary), BenchError> {
    let r = load(config, opts.seeds)?;
    execute(&r, opts)
}
