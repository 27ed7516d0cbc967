//! Zeroth-order block coordinate solvers.
//!
//! Every solver runs all `T` steps and reports the iterate `x_R` with `R`
//! drawn from the algorithm's output distribution at the start of the run.
//! Random streams are keyed by `(seed, run, purpose, k, t)` so the block
//! sequence does not depend on batch sizes and replications do not depend on
//! scheduling.

mod run;
pub mod schedule;
mod two_phase;

use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DEFAULT_MAX_INNER;
use crate::rng::RngStream;

pub use run::{solve, validate, zs_bccg_approx, zs_bccg_composite, zs_bccg_smooth, zs_bcd, zs_bmd};
pub use two_phase::{post_stream, two_phase, TwoPhaseConfig, TwoPhaseReport};

/// Iterates with norm above this are treated as divergence on unconstrained problems.
pub const DIVERGENCE_NORM: f64 = 1e12;
/// Full trajectories are kept up to this many iterations, thinned beyond.
pub const FULL_TRAJECTORY_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    ZsBcd,
    ZsBmd,
    ZsBccgSmooth,
    ZsBccgComposite,
    ZsBccgApprox,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::ZsBcd,
        Algorithm::ZsBmd,
        Algorithm::ZsBccgSmooth,
        Algorithm::ZsBccgComposite,
        Algorithm::ZsBccgApprox,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::ZsBcd => "zs_bcd",
            Algorithm::ZsBmd => "zs_bmd",
            Algorithm::ZsBccgSmooth => "zs_bccg_smooth",
            Algorithm::ZsBccgComposite => "zs_bccg_composite",
            Algorithm::ZsBccgApprox => "zs_bccg_approx",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Algorithm::ZsBcd => "block coordinate descent, unconstrained, single-sample estimator",
            Algorithm::ZsBmd => "block mirror descent with Bregman prox and batch estimator",
            Algorithm::ZsBccgSmooth => "block conditional gradient with linear minimization",
            Algorithm::ZsBccgComposite => "block conditional gradient with regularized linear minimization",
            Algorithm::ZsBccgApprox => "block method with inexact conditional-gradient prox",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::Unknown { kind: "algorithm", name: name.to_string() })
    }
}

/// A per-iteration parameter: one value for every step, or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Schedule<T> {
    Constant(T),
    List(Vec<T>),
}

impl<T: Copy> Schedule<T> {
    /// Value at 0-based step `k`. Lists are validated to cover every step before a run.
    pub fn at(&self, k: usize) -> T {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::List(v) => v[k],
        }
    }

    pub fn values(&self, steps: usize, what: &str) -> Result<Vec<T>> {
        match self {
            Schedule::Constant(v) => Ok(vec![*v; steps]),
            Schedule::List(v) if v.len() >= steps => Ok(v[..steps].to_vec()),
            Schedule::List(v) => {
                Err(Error::Config(format!("{what} schedule has {} entries but the run has {steps} steps", v.len())))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lipschitz {
    /// `L_s` per block.
    pub blocks: Vec<f64>,
    /// `L_f`.
    pub full: f64,
}

impl Lipschitz {
    pub fn new(blocks: Vec<f64>, full: f64) -> Result<Self> {
        let l = Self { blocks, full };
        l.check(None)?;
        Ok(l)
    }

    /// `L-hat = max L_s`.
    pub fn hat(&self) -> f64 {
        self.blocks.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `L-check = min L_s`.
    pub fn check_min(&self) -> f64 {
        self.blocks.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// `L-tilde = max(L_f, L-hat)`.
    pub fn tilde(&self) -> f64 {
        self.full.max(self.hat())
    }

    fn check(&self, blocks: Option<usize>) -> Result<()> {
        if let Some(b) = blocks {
            if self.blocks.len() != b {
                return Err(Error::Dimension { expected: b, got: self.blocks.len() });
            }
        }
        if self.blocks.is_empty() || self.blocks.iter().chain([&self.full]).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Config("Lipschitz constants must be positive and finite".into()));
        }
        Ok(())
    }
}

/// Which output distribution ZS-BCD uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcdVariant {
    /// `P_R(k) ∝ alpha_k [min p_s - 2 (n+4) max(p_s L_s) alpha_k]`
    #[default]
    Nonconvex,
    /// `P_R(k) ∝ alpha_k - 4 (n+5) L_f alpha_k^2`
    Convex,
}

fn default_batch() -> Schedule<usize> {
    Schedule::Constant(1)
}

fn default_max_inner() -> usize {
    DEFAULT_MAX_INNER
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Iteration limit `T`.
    pub iterations: usize,
    pub stepsizes: Schedule<f64>,
    #[serde(default = "default_batch")]
    pub batch_sizes: Schedule<usize>,
    /// Block probabilities `p_s`; uniform when absent.
    #[serde(default)]
    pub block_probs: Option<Vec<f64>>,
    /// `delta_k`, approximate variant only.
    #[serde(default)]
    pub deltas: Option<Schedule<f64>>,
    pub seed: u64,
    /// Replication index; selects an independent stream family under `seed`.
    #[serde(default)]
    pub run: u64,
    #[serde(default)]
    pub lipschitz: Option<Lipschitz>,
    #[serde(default)]
    pub bcd_variant: BcdVariant,
    #[serde(default = "default_max_inner")]
    pub max_inner: usize,
    #[serde(default = "default_true")]
    pub store_trajectory: bool,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, iterations: usize, stepsizes: Schedule<f64>, seed: u64) -> Self {
        Self {
            algorithm,
            iterations,
            stepsizes,
            batch_sizes: default_batch(),
            block_probs: None,
            deltas: None,
            seed,
            run: 0,
            lipschitz: None,
            bcd_variant: BcdVariant::Nonconvex,
            max_inner: DEFAULT_MAX_INNER,
            store_trajectory: true,
        }
    }

    pub fn with_batch(mut self, batch: Schedule<usize>) -> Self {
        self.batch_sizes = batch;
        self
    }

    pub fn with_probs(mut self, p: Vec<f64>) -> Self {
        self.block_probs = Some(p);
        self
    }

    pub fn with_deltas(mut self, d: Schedule<f64>) -> Self {
        self.deltas = Some(d);
        self
    }

    pub fn with_lipschitz(mut self, l: Lipschitz) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_run(mut self, run: u64) -> Self {
        self.run = run;
        self
    }

    pub fn with_bcd_variant(mut self, v: BcdVariant) -> Self {
        self.bcd_variant = v;
        self
    }

    pub fn without_trajectory(mut self) -> Self {
        self.store_trajectory = false;
        self
    }

    /// Root stream of this run.
    pub fn stream(&self) -> RngStream {
        RngStream::new(self.seed).derive(self.run)
    }

    /// Block probabilities, uniform when unset, validated against `blocks`.
    pub fn probabilities(&self, blocks: usize) -> Result<Vec<f64>> {
        let p = match &self.block_probs {
            None => vec![1.0 / blocks as f64; blocks],
            Some(p) => p.clone(),
        };
        if p.len() != blocks {
            return Err(Error::Dimension { expected: blocks, got: p.len() });
        }
        if let Some(s) = p.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Config(format!(
                "block probability p_{s} = {} must be positive (a zero-probability block is never updated)",
                p[s]
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("block probabilities sum to {sum}, not 1")));
        }
        Ok(p)
    }

    /// Total estimator samples `sum_k T_k`.
    pub fn total_samples(&self) -> Result<u64> {
        Ok(self.batch_sizes.values(self.iterations, "batch size")?.iter().map(|&t| t as u64).sum())
    }
}

/// Probability mass function `P_R` on `{1, ..., T}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDistribution {
    weights: Vec<f64>,
}

impl OutputDistribution {
    /// Normalizes nonnegative raw weights; a negative entry is reported with its 1-based step.
    pub fn from_raw(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Config("output distribution needs at least one step".into()));
        }
        if let Some(k) = raw.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Admissibility {
                step: k + 1,
                condition: format!("output weight {} is negative or not finite", raw[k]),
            });
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::Admissibility {
                step: 1,
                condition: "every output weight is zero (stepsizes on the admissibility boundary)".into(),
            });
        }
        Ok(Self { weights: raw.iter().map(|w| w / total).collect() })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Inverse-CDF draw of `R` in `1..=T`.
    pub fn sample(&self, stream: &RngStream) -> usize {
        let u: f64 = stream.rng().random();
        let mut acc = 0.0;
        let mut last = 1;
        for (k, w) in self.weights.iter().enumerate() {
            if *w > 0.0 {
                last = k + 1;
            }
            acc += w;
            if u < acc && *w > 0.0 {
                return k + 1;
            }
        }
        last
    }
}

/// `P_R` for ZS-BCD.
pub fn output_weights_zs_bcd(
    alphas: &[f64],
    probs: &[f64],
    lipschitz: &Lipschitz,
    n: usize,
    variant: BcdVariant,
) -> Result<OutputDistribution> {
    let nf = n as f64;
    let raw: Vec<f64> = match variant {
        BcdVariant::Nonconvex => {
            let pmin = probs.iter().cloned().fold(f64::INFINITY, f64::min);
            let pl = max_pl(probs, lipschitz);
            alphas.iter().map(|a| a * (pmin - 2.0 * (nf + 4.0) * pl * a)).collect()
        }
        BcdVariant::Convex => alphas.iter().map(|a| a - 4.0 * (nf + 5.0) * lipschitz.full * a * a).collect(),
    };
    OutputDistribution::from_raw(&raw)
}

/// `P_R(k) ∝ alpha_k min_s p_s (1 - L_s alpha_k / 2)` for ZS-BMD.
pub fn output_weights_zs_bmd(alphas: &[f64], probs: &[f64], lipschitz: &Lipschitz) -> Result<OutputDistribution> {
    let raw: Vec<f64> = alphas.iter().map(|a| a * min_p_factor(probs, lipschitz, 0.5 * a)).collect();
    OutputDistribution::from_raw(&raw)
}

/// `P_R(k) = alpha_k / sum alpha` for the conditional gradient variants.
pub fn output_weights_zs_bccg(alphas: &[f64]) -> Result<OutputDistribution> {
    OutputDistribution::from_raw(alphas)
}

/// `P_R(k) ∝ alpha_k min_s p_s (1 - L_s alpha_k)` for the approximate variant.
pub fn output_weights_zs_bccg_approx(
    alphas: &[f64],
    probs: &[f64],
    lipschitz: &Lipschitz,
) -> Result<OutputDistribution> {
    let raw: Vec<f64> = alphas.iter().map(|a| a * min_p_factor(probs, lipschitz, *a)).collect();
    OutputDistribution::from_raw(&raw)
}

fn min_p_factor(probs: &[f64], l: &Lipschitz, c: f64) -> f64 {
    probs.iter().zip(&l.blocks).map(|(p, ls)| p * (1.0 - ls * c)).fold(f64::INFINITY, f64::min)
}

pub(crate) fn max_pl(probs: &[f64], l: &Lipschitz) -> f64 {
    probs.iter().zip(&l.blocks).map(|(p, ls)| p * ls).fold(f64::NEG_INFINITY, f64::max)
}

/// Inverse-CDF block draw.
pub(crate) fn sample_block(probs: &[f64], stream: &RngStream) -> usize {
    if probs.len() == 1 {
        return 0;
    }
    let u: f64 = stream.rng().random();
    let mut acc = 0.0;
    for (s, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return s;
        }
    }
    probs.len() - 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based step `k`; the step maps `x_k` to `x_{k+1}`.
    pub k: usize,
    /// 0-based block `i_k`.
    pub block: usize,
    pub alpha: f64,
    pub batch: usize,
    /// Cumulative oracle calls after the step.
    pub oracle_calls: u64,
    /// Norm of the block estimator.
    pub estimate_norm: f64,
    /// Estimator-based block gap `<G, z - v> + chi(z) - chi(v)`, conditional gradient variants.
    pub surrogate_gap: Option<f64>,
    /// Inner steps of the conditional-gradient prox, approximate variant.
    pub inner_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub iterations: usize,
    /// 1-based output index.
    pub r: usize,
    pub x_r: Vec<f64>,
    pub alpha_r: f64,
    /// `x_{T+1}`.
    pub final_point: Vec<f64>,
    /// `(k, x_k)` for `k = 1..=T+1`, thinned beyond [`FULL_TRAJECTORY_LIMIT`] steps.
    pub trajectory: Vec<(usize, Vec<f64>)>,
    pub steps: Vec<StepRecord>,
    pub oracle_calls: u64,
    pub output_weights: Vec<f64>,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn point(&self, k: usize) -> Option<&[f64]> {
        self.trajectory.iter().find(|(j, _)| *j == k).map(|(_, x)| x.as_slice())
    }
}
