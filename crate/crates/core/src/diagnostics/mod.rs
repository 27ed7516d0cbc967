//! Stationarity measures and evaluators for the convergence bounds.
//!
//! Metrics use analytic gradients from [`crate::problems`]; they are for
//! evaluation only and never reach a solver.

mod bounds;

use serde::{Deserialize, Serialize};

use crate::block::{dist_sq, dot, norm_sq, BlockLayout};
use crate::error::{Error, Result};
use crate::problems::TestProblem;

pub use bounds::{bound_rhs, sigma_tilde_sq, two_phase_failure_probability, BoundId, BoundInputs};

/// Tolerance under which gaps are considered nonnegative.
pub const GAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    GradMappingSq,
    FwGap,
    GenFwGap,
    Suboptimality,
    WeightedDistSq,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::GradMappingSq,
        MetricKind::FwGap,
        MetricKind::GenFwGap,
        MetricKind::Suboptimality,
        MetricKind::WeightedDistSq,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::GradMappingSq => "grad_mapping_sq",
            MetricKind::FwGap => "fw_gap",
            MetricKind::GenFwGap => "gen_fw_gap",
            MetricKind::Suboptimality => "suboptimality",
            MetricKind::WeightedDistSq => "weighted_dist_sq",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == name)
            .ok_or_else(|| Error::Unknown { kind: "metric", name: name.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub kind: MetricKind,
    pub value: f64,
    /// 1-based iterate index.
    pub iterate: usize,
}

/// `||P(x, grad f(x), alpha)||^2`.
pub fn grad_mapping_sq(problem: &TestProblem, x: &[f64], alpha: f64) -> Result<f64> {
    let g = problem.gradient(x);
    Ok(norm_sq(&problem.geometry().gradient_mapping(x, &g, alpha)?))
}

fn require_bounded(problem: &TestProblem) -> Result<()> {
    if problem.geometry().is_bounded() {
        Ok(())
    } else {
        Err(Error::UnsupportedGeometry("Frank-Wolfe gaps need every block to be bounded".into()))
    }
}

/// `g_X = <grad f(z), z - argmin_{x in X} <grad f(z), x>>`.
pub fn fw_gap(problem: &TestProblem, z: &[f64]) -> Result<f64> {
    require_bounded(problem)?;
    let g = problem.gradient(z);
    let v = problem.geometry().linear_lmo(&g)?;
    let d: Vec<f64> = z.iter().zip(&v).map(|(a, b)| a - b).collect();
    Ok(dot(&g, &d))
}

/// `gbar_X = <grad f(z), z - v> + chi(z) - chi(v)` with `v` the composite LMO point.
pub fn gen_fw_gap(problem: &TestProblem, z: &[f64]) -> Result<f64> {
    require_bounded(problem)?;
    let geo = problem.geometry();
    let g = problem.gradient(z);
    let v = geo.lmo(&g)?;
    let d: Vec<f64> = z.iter().zip(&v).map(|(a, b)| a - b).collect();
    Ok(dot(&g, &d) + geo.chi_value(z)? - geo.chi_value(&v)?)
}

/// Per-block generalized gaps `gbar_s`; without a regularizer these are the block FW gaps `g_s`.
pub fn block_gen_fw_gaps(problem: &TestProblem, z: &[f64]) -> Result<Vec<f64>> {
    require_bounded(problem)?;
    let geo = problem.geometry();
    let layout = geo.layout();
    let g = problem.gradient(z);
    (0..layout.num_blocks())
        .map(|s| {
            let b = geo.block(s)?;
            let (zs, gs) = (layout.view(z, s)?, layout.view(&g, s)?);
            let v = b.lmo(gs)?;
            let d: Vec<f64> = zs.iter().zip(&v).map(|(a, c)| a - c).collect();
            Ok(dot(gs, &d) + b.chi_value(zs) - b.chi_value(&v))
        })
        .collect()
}

/// `Phi(x) - Phi*`; needs the problem's optimal value.
pub fn suboptimality(problem: &TestProblem, x: &[f64]) -> Result<f64> {
    let star = problem.optimal_value().ok_or(Error::MissingConstant("optimal value"))?;
    Ok(problem.composite_value(x)? - star)
}

/// `N^2 = sum_s ||x^(s) - x*^(s)||^2 / p_s`.
pub fn weighted_dist_sq(layout: &BlockLayout, x: &[f64], x_star: &[f64], p: &[f64]) -> Result<f64> {
    layout.check_len(x)?;
    layout.check_len(x_star)?;
    if p.len() != layout.num_blocks() {
        return Err(Error::Dimension { expected: layout.num_blocks(), got: p.len() });
    }
    let mut total = 0.0;
    for (s, ps) in p.iter().enumerate() {
        if !(*ps > 0.0) {
            return Err(Error::Config(format!("weighted distance needs p_{s} > 0, got {ps}")));
        }
        total += dist_sq(layout.view(x, s)?, layout.view(x_star, s)?) / ps;
    }
    Ok(total)
}

/// Evaluates `kind` at `x`; `alpha` is the stepsize paired with `x` and `probs` the block probabilities.
pub fn evaluate(problem: &TestProblem, kind: MetricKind, x: &[f64], alpha: f64, probs: &[f64]) -> Result<f64> {
    match kind {
        MetricKind::GradMappingSq => grad_mapping_sq(problem, x, alpha),
        MetricKind::FwGap => fw_gap(problem, x),
        MetricKind::GenFwGap => gen_fw_gap(problem, x),
        MetricKind::Suboptimality => suboptimality(problem, x),
        MetricKind::WeightedDistSq => {
            let xs = problem.minimizer().ok_or(Error::MissingConstant("minimizer"))?;
            weighted_dist_sq(problem.layout(), x, xs, probs)
        }
    }
}

/// Fraction of values above `epsilon` with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureRate {
    pub failures: usize,
    pub total: usize,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Two-sided normal quantile at 95%.
pub const Z95: f64 = 1.959_963_984_540_054;

pub fn wilson_interval(successes: usize, total: usize, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Empirical `Prob{value > epsilon}`.
pub fn empirical_eps_lambda(values: &[f64], epsilon: f64) -> Result<FailureRate> {
    if values.is_empty() {
        return Err(Error::Config("failure rate needs at least one value".into()));
    }
    let failures = values.iter().filter(|v| **v > epsilon).count();
    let (lower, upper) = wilson_interval(failures, values.len(), Z95);
    Ok(FailureRate { failures, total: values.len(), rate: failures as f64 / values.len() as f64, lower, upper })
}

/// Sample mean and standard error.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
