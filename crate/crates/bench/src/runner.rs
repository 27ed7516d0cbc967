//! Seeded replications, fanned out over a bounded worker pool.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use zsbc::diagnostics::{evaluate, MetricKind};
use zsbc::solvers::{solve, two_phase, RunReport};

use crate::resolve::Resolved;
use crate::BenchError;

/// Outcome of one replication that finished.
#[derive(Debug, Clone, Serialize)]
pub struct SeedRun {
    pub seed: u64,
    /// 1-based output index of the reported run.
    pub r: usize,
    /// 0-based selected candidate, two-phase only.
    pub selected: Option<usize>,
    pub oracle_calls: u64,
    pub expected_calls: u64,
    pub accounting_ok: bool,
    /// Metric values at the output iterate, keyed by metric name.
    pub metrics: BTreeMap<&'static str, f64>,
    #[serde(skip)]
    pub csv: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedFailure {
    pub seed: u64,
    pub error: String,
}

pub type SeedOutcome = Result<SeedRun, SeedFailure>;

/// Runs every replication on a pool of `jobs` threads. Results come back in seed order.
pub fn run_all(r: &Resolved, jobs: usize) -> Result<Vec<SeedOutcome>, BenchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| BenchError::Runtime(format!("cannot start worker pool: {e}")))?;
    let seeds = r.seeds();
    Ok(pool.install(|| seeds.par_iter().map(|&seed| run_seed(r, seed)).collect()))
}

pub fn run_seed(r: &Resolved, seed: u64) -> SeedOutcome {
    run_seed_inner(r, seed).map_err(|e| SeedFailure { seed, error: e.to_string() })
}

fn run_seed_inner(r: &Resolved, seed: u64) -> zsbc::Result<SeedRun> {
    let p = &r.problem;
    let oracle = p.oracle(r.mu)?;
    let config = r.seed_config(seed);
    let per_run = 2 * config.total_samples()?;
    let (report, x_out, alpha_out, selected, calls, expected) = match &r.two_phase {
        None => {
            let rep = solve(&oracle, p.geometry(), &config, p.x1())?;
            let (x, a, c) = (rep.x_r.clone(), rep.alpha_r, rep.oracle_calls);
            (rep, x, a, None, c, per_run)
        }
        Some(tp) => {
            let mut tp = tp.clone();
            tp.base = config.clone();
            let out = two_phase(&oracle, p.geometry(), &tp, p.x1())?;
            let s = out.selected;
            let alpha = out.reports[s].alpha_r;
            let expected = tp.runs as u64 * (per_run + 2 * tp.post_samples as u64);
            let calls = out.oracle_calls;
            let rep = out.reports.into_iter().nth(s).expect("selected run exists");
            (rep, out.x_star, alpha, Some(s), calls, expected)
        }
    };

    let probs = r.probs();
    let mut metrics = BTreeMap::new();
    for &k in &r.metrics {
        metrics.insert(k.name(), evaluate(p, k, &x_out, alpha_out, &probs)?);
    }
    let csv = trajectory_csv(r, &report, &r.metrics, &probs)?;
    Ok(SeedRun {
        seed,
        r: report.r,
        selected,
        oracle_calls: calls,
        expected_calls: expected,
        accounting_ok: calls == expected && oracle.calls() == calls,
        metrics,
        csv,
    })
}

/// Row `k` holds `x_k`, the block whose update produced it and the calls spent so far.
fn trajectory_csv(r: &Resolved, rep: &RunReport, metrics: &[MetricKind], probs: &[f64]) -> zsbc::Result<String> {
    let mut out = String::from("iter,block");
    for m in metrics {
        let _ = write!(out, ",metric:{}", m.name());
    }
    out.push_str(",oracle_calls\n");
    let t = rep.steps.len();
    for (k, x) in &rep.trajectory {
        let k = *k;
        let prev = (k >= 2).then(|| &rep.steps[k - 2]);
        let _ = write!(out, "{k},");
        if let Some(step) = prev {
            let _ = write!(out, "{}", step.block);
        }
        let alpha = rep.steps.get(k.min(t).saturating_sub(1)).map_or(1.0, |s| s.alpha);
        for &m in metrics {
            let v = evaluate(&r.problem, m, x, alpha, probs)?;
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{}", prev.map_or(0, |s| s.oracle_calls));
    }
    Ok(out)
}
