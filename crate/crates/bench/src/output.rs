//! Manifest, summary and trajectory files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use zsbc::diagnostics::{bound_rhs, BoundInputs};

use crate::config::ExperimentConfig;
use crate::resolve::{Derived, Resolved};
use crate::runner::{SeedFailure, SeedOutcome, SeedRun};
use crate::BenchError;

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a ExperimentConfig,
    pub derived: &'a Derived,
    pub solver: &'a zsbc::solvers::SolverConfig,
    pub bound_inputs: &'a BoundInputs,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricStats {
    pub mean: f64,
    /// Sample standard deviation; zero with one seed.
    pub stddev: f64,
    pub seeds: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundComparison {
    pub id: &'static str,
    /// Displayed right-hand side.
    pub rhs: Option<f64>,
    pub metric: Option<&'static str>,
    /// Bound on the expected metric.
    pub metric_bound: Option<f64>,
    pub empirical_mean: Option<f64>,
    pub seeds: usize,
    pub pass: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub replications: usize,
    pub succeeded: usize,
    pub metrics: BTreeMap<&'static str, MetricStats>,
    pub bounds: Vec<BoundComparison>,
    pub accounting_ok: bool,
    pub runs: Vec<SeedRun>,
    pub failures: Vec<SeedFailure>,
}

impl Summary {
    /// False when a bound comparison fails or the call accounting is off.
    pub fn checks_pass(&self) -> bool {
        self.accounting_ok && self.bounds.iter().all(|b| b.pass != Some(false))
    }
}

fn stats(values: &[f64]) -> MetricStats {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = if n > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
    MetricStats { mean, stddev: var.sqrt(), seeds: n }
}

pub fn summarize(r: &Resolved, outcomes: &[SeedOutcome]) -> Summary {
    let runs: Vec<SeedRun> = outcomes.iter().filter_map(|o| o.as_ref().ok().cloned()).collect();
    let failures: Vec<SeedFailure> = outcomes.iter().filter_map(|o| o.as_ref().err().cloned()).collect();
    let mut metrics = BTreeMap::new();
    if !runs.is_empty() {
        for m in &r.metrics {
            let v: Vec<f64> = runs.iter().map(|s| s.metrics[m.name()]).collect();
            metrics.insert(m.name(), stats(&v));
        }
    }
    let bounds = r
        .compare
        .iter()
        .map(|id| {
            let mut c = BoundComparison {
                id: id.name(),
                rhs: None,
                metric: id.metric().map(|m| m.name()),
                metric_bound: None,
                empirical_mean: None,
                seeds: 0,
                pass: None,
                error: None,
            };
            match (bound_rhs(*id, &r.bound_inputs), id.metric_bound(&r.bound_inputs)) {
                (Ok(rhs), Ok(mb)) => {
                    c.rhs = Some(rhs);
                    if let Some((m, v)) = mb {
                        c.metric_bound = Some(v);
                        if let Some(s) = metrics.get(m.name()) {
                            c.empirical_mean = Some(s.mean);
                            c.seeds = s.seeds;
                            c.pass = Some(s.mean <= v);
                        }
                    }
                }
                (Err(e), _) | (_, Err(e)) => c.error = Some(e.to_string()),
            }
            c
        })
        .collect();
    Summary {
        replications: outcomes.len(),
        succeeded: runs.len(),
        accounting_ok: runs.iter().all(|s| s.accounting_ok),
        metrics,
        bounds,
        runs,
        failures,
    }
}

fn io(path: &Path, e: std::io::Error) -> BenchError {
    BenchError::Runtime(format!("cannot write {}: {e}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), BenchError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| BenchError::Runtime(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io(path, e))
}

pub fn manifest(r: &Resolved) -> Manifest<'_> {
    Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: &r.config,
        derived: &r.derived,
        solver: &r.base,
        bound_inputs: &r.bound_inputs,
        seeds: r.seeds(),
    }
}

/// Writes every output file. Called once, after all replications, in seed order.
pub fn write_all(dir: &Path, r: &Resolved, outcomes: &[SeedOutcome], summary: &Summary) -> Result<(), BenchError> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    write_json(&dir.join("manifest.json"), &manifest(r))?;
    for run in outcomes.iter().flatten() {
        let path = dir.join(format!("trajectory_{}.csv", run.seed));
        fs::write(&path, &run.csv).map_err(|e| io(&path, e))?;
    }
    write_json(&dir.join("summary.json"), summary)
}

/// A gnuplot script plotting the first metric of every trajectory on a log scale.
pub fn gnuplot_stub(r: &Resolved, outcomes: &[SeedOutcome]) -> String {
    let metric = r.metrics.first().map_or("grad_mapping_sq", |m| m.name());
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key autotitle columnhead\nset logscale y\n");
    s.push_str(&format!("set xlabel 'iteration'\nset ylabel '{metric}'\n"));
    let files: Vec<String> = outcomes
        .iter()
        .flatten()
        .map(|run| format!("'trajectory_{}.csv' using 1:3 with lines title 'seed {}'", run.seed, run.seed))
        .collect();
    if !files.is_empty() {
        s.push_str("plot ");
        s.push_str(&files.join(", \\\n     "));
        s.push('\n');
    }
    s
}
