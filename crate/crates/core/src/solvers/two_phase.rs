use serde::{Deserialize, Serialize};

use super::{run::solve, Algorithm, RunReport, SolverConfig};
use crate::block::norm;
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::oracle::SmoothedOracle;
use crate::rng::{tag, RngStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPhaseConfig {
    /// `S`, number of independent runs.
    pub runs: usize,
    /// `𝒯`, samples in the post-optimization estimator.
    pub post_samples: usize,
    /// Target `epsilon`, recorded only.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Target `Lambda`, recorded only.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Template for every run; run `i` uses `base.with_run(i)`.
    pub base: SolverConfig,
}

#[derive(Debug, Clone)]
pub struct TwoPhaseReport {
    /// 0-based index of the selected candidate.
    pub selected: usize,
    pub x_star: Vec<f64>,
    pub candidates: Vec<Vec<f64>>,
    /// `||P(x_i, G_{mu,𝒯}(x_i), alpha_{R_i})||` per candidate.
    pub scores: Vec<f64>,
    pub reports: Vec<RunReport>,
    /// Optimization calls plus `2 𝒯 S` post-optimization calls.
    pub oracle_calls: u64,
}

/// Stream of the post-optimization estimator for candidate `run`.
pub fn post_stream(seed: u64, run: u64) -> RngStream {
    RngStream::new(seed).derive(run).derive(tag::POST)
}

/// Index of the smallest score, lowest index on ties.
pub(crate) fn argmin(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s < scores[best] {
            best = i;
        }
    }
    best
}

/// Runs `S` independent copies of the base solver, then keeps the candidate
/// whose estimated gradient mapping is smallest.
pub fn two_phase(
    oracle: &SmoothedOracle,
    geometry: &Geometry,
    tp: &TwoPhaseConfig,
    x1: &[f64],
) -> Result<TwoPhaseReport> {
    if !matches!(tp.base.algorithm, Algorithm::ZsBmd | Algorithm::ZsBccgApprox) {
        return Err(Error::Config(format!(
            "the two-phase scheme wraps zs_bmd or zs_bccg_approx, not {}",
            tp.base.algorithm.name()
        )));
    }
    if tp.runs == 0 || tp.post_samples == 0 {
        return Err(Error::Config("two-phase needs at least one run and one post-optimization sample".into()));
    }

    let mut reports = Vec::with_capacity(tp.runs);
    let mut scores = Vec::with_capacity(tp.runs);
    let mut calls = 0u64;
    for i in 0..tp.runs {
        let cfg = tp.base.clone().with_run(i as u64);
        let rep = solve(oracle, geometry, &cfg, x1)?;
        calls += rep.oracle_calls;
        let g = oracle.batch_estimate(&rep.x_r, tp.post_samples, &post_stream(cfg.seed, i as u64))?;
        calls += 2 * tp.post_samples as u64;
        scores.push(norm(&geometry.gradient_mapping(&rep.x_r, &g, rep.alpha_r)?));
        reports.push(rep);
    }
    let selected = argmin(&scores);
    let candidates: Vec<Vec<f64>> = reports.iter().map(|r| r.x_r.clone()).collect();
    Ok(TwoPhaseReport {
        selected,
        x_star: candidates[selected].clone(),
        candidates,
        scores,
        reports,
        oracle_calls: calls,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::{Lipschitz, Schedule};
    use super::*;
    use crate::block::BlockLayout;
    use crate::geometry::Regularizer;
    use crate::oracle::{FnObjective, NoiseModel, Objective};

    fn setup() -> (SmoothedOracle, Geometry, SolverConfig) {
        let f: Arc<dyn Objective> =
            Arc::new(FnObjective::new(4, |x: &[f64]| x.iter().map(|v| 0.5 * (v - 0.3).powi(2)).sum::<f64>()));
        let layout = Arc::new(BlockLayout::new(vec![2, 2]).unwrap());
        let o = SmoothedOracle::new(f, NoiseModel::GradientConsistent { sigma: 0.5 }, 1e-3, layout.clone()).unwrap();
        let geo = Geometry::uniform_box(layout, -1.0, 1.0, Regularizer::L1 { weight: 0.05 }).unwrap();
        let base = SolverConfig::new(Algorithm::ZsBmd, 20, Schedule::Constant(1.0), 5)
            .with_batch(Schedule::Constant(4))
            .with_lipschitz(Lipschitz::new(vec![1.0, 1.0], 1.0).unwrap());
        (o, geo, base)
    }

    #[test]
    fn single_run_returns_its_output() {
        let (o, geo, base) = setup();
        let tp = TwoPhaseConfig { runs: 1, post_samples: 10, epsilon: None, lambda: None, base: base.clone() };
        let rep = two_phase(&o, &geo, &tp, &[0.0; 4]).unwrap();
        let direct = solve(&o, &geo, &base, &[0.0; 4]).unwrap();
        assert_eq!(rep.selected, 0);
        assert_eq!(rep.x_star, direct.x_r);
    }

    #[test]
    fn selects_smallest_score_and_counts_calls() {
        assert_eq!(argmin(&[0.3, 0.1, 0.2]), 1);
        assert_eq!(argmin(&[0.2, 0.1, 0.1]), 1);
        let (o, geo, base) = setup();
        let tp = TwoPhaseConfig { runs: 4, post_samples: 25, epsilon: Some(0.1), lambda: Some(0.5), base };
        o.reset_calls();
        let rep = two_phase(&o, &geo, &tp, &[0.0; 4]).unwrap();
        assert_eq!(rep.oracle_calls, 4 * 2 * 20 * 4 + 2 * 25 * 4);
        assert_eq!(o.calls(), rep.oracle_calls);
        let best = rep.scores.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(rep.scores[rep.selected], best);
        assert_eq!(rep.x_star, rep.candidates[rep.selected]);
        // runs use distinct streams
        assert_ne!(rep.reports[0].steps, rep.reports[1].steps);
    }

    #[test]
    fn rejects_other_base_solvers() {
        let (o, geo, base) = setup();
        let mut b = base;
        b.algorithm = Algorithm::ZsBccgSmooth;
        let tp = TwoPhaseConfig { runs: 2, post_samples: 5, epsilon: None, lambda: None, base: b };
        assert!(two_phase(&o, &geo, &tp, &[0.0; 4]).is_err());
    }
}
