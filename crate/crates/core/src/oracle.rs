//! Stochastic zeroth-order oracle and Gaussian smoothing estimators.
//!
//! The oracle returns noisy values `F(x, xi)` of an objective it never
//! differentiates. The two-point estimator
//! `G_mu(x, xi, u) = [F(x + mu u, xi) - F(x, xi)] / mu * u`
//! is unbiased for the gradient of the Gaussian smoothing
//! `f_mu(x) = E[f(x + mu u)]`.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::block::BlockLayout;
use crate::error::{Error, Result};
use crate::rng::{gaussian_vec, RngStream};

/// Smallest smoothing parameter accepted in double precision.
pub const MU_FLOOR: f64 = 1e-8;

/// Deterministic function of the decision vector.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
}

/// Adapter turning a closure into an [`Objective`].
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnObjective<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Objective for FnObjective<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    Noiseless,
    /// `F(x, xi) = f(x) + sigma_v * xi` with scalar `xi ~ N(0, 1)`.
    AdditiveGaussianValue {
        sigma_v: f64,
    },
    /// `F(x, xi) = f(x) + <xi, x>` with `xi ~ N(0, sigma^2 / n I)`, so that
    /// `E[grad F] = grad f` and `E||grad F - grad f||^2 = sigma^2` exactly.
    GradientConsistent {
        sigma: f64,
    },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let level = match *self {
            NoiseModel::Noiseless => 0.0,
            NoiseModel::AdditiveGaussianValue { sigma_v } => sigma_v,
            NoiseModel::GradientConsistent { sigma } => sigma,
        };
        if !(level.is_finite() && level >= 0.0) {
            return Err(Error::Config(format!("noise level must be finite and nonnegative, got {level}")));
        }
        Ok(())
    }

    /// Gradient noise level `sigma` in the sense of the variance assumption.
    pub fn gradient_sigma(&self) -> f64 {
        match *self {
            NoiseModel::GradientConsistent { sigma } => sigma,
            _ => 0.0,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> NoiseDraw {
        match *self {
            NoiseModel::Noiseless => NoiseDraw::None,
            NoiseModel::AdditiveGaussianValue { sigma_v } => {
                let z: f64 = StandardNormal.sample(rng);
                NoiseDraw::Value(sigma_v * z)
            }
            NoiseModel::GradientConsistent { sigma } => {
                if sigma == 0.0 {
                    return NoiseDraw::None;
                }
                let scale = sigma / (n as f64).sqrt();
                NoiseDraw::Linear(gaussian_vec(rng, n).into_iter().map(|z| z * scale).collect())
            }
        }
    }
}

/// One realization of the oracle noise `xi`.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseDraw {
    None,
    Value(f64),
    Linear(Vec<f64>),
}

impl NoiseDraw {
    fn apply(&self, fx: f64, x: &[f64]) -> f64 {
        match self {
            NoiseDraw::None => fx,
            NoiseDraw::Value(e) => fx + e,
            NoiseDraw::Linear(xi) => fx + crate::block::dot(xi, x),
        }
    }
}

/// Noisy value oracle with a smoothing parameter and an evaluation counter.
pub struct SmoothedOracle {
    objective: Arc<dyn Objective>,
    noise: NoiseModel,
    mu: f64,
    layout: Arc<BlockLayout>,
    calls: AtomicU64,
}

impl fmt::Debug for SmoothedOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothedOracle")
            .field("dim", &self.layout.dim())
            .field("noise", &self.noise)
            .field("mu", &self.mu)
            .field("calls", &self.calls())
            .finish()
    }
}

impl SmoothedOracle {
    pub fn new(objective: Arc<dyn Objective>, noise: NoiseModel, mu: f64, layout: Arc<BlockLayout>) -> Result<Self> {
        if !(mu.is_finite() && mu >= MU_FLOOR) {
            return Err(Error::Config(format!("smoothing parameter must be at least {MU_FLOOR:e}, got {mu:e}")));
        }
        if objective.dim() != layout.dim() {
            return Err(Error::Dimension { expected: layout.dim(), got: objective.dim() });
        }
        noise.validate()?;
        Ok(Self { objective, noise, mu, layout, calls: AtomicU64::new(0) })
    }

    /// Same objective and noise with a different smoothing parameter; the counter starts at zero.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.objective.clone(), self.noise, mu, self.layout.clone())
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn layout_arc(&self) -> Arc<BlockLayout> {
        self.layout.clone()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn objective(&self) -> &Arc<dyn Objective> {
        &self.objective
    }

    /// Total number of `F` evaluations so far.
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    /// One evaluation of `F(x, xi)` with a fresh `xi` drawn from `stream`.
    pub fn evaluate(&self, x: &[f64], stream: &RngStream) -> Result<f64> {
        self.layout.check_len(x)?;
        let xi = self.noise.draw(&mut stream.rng(), x.len());
        self.evaluate_with(x, &xi)
    }

    /// `F(x, xi)` for a given noise realization.
    pub fn evaluate_with(&self, x: &[f64], xi: &NoiseDraw) -> Result<f64> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let v = xi.apply(self.objective.value(x), x);
        if !v.is_finite() {
            return Err(Error::Numerical { value: v, iterate: x.to_vec() });
        }
        Ok(v)
    }

    /// Scalar factor `[F(x + mu u, xi) - F(x, xi)] / mu` of the estimator; two oracle calls.
    pub fn difference_quotient(&self, x: &[f64], u: &[f64], xi: &NoiseDraw) -> Result<f64> {
        let mut shifted = Vec::with_capacity(x.len());
        self.quotient_into(x, u, xi, &mut shifted)
    }

    fn quotient_into(&self, x: &[f64], u: &[f64], xi: &NoiseDraw, shifted: &mut Vec<f64>) -> Result<f64> {
        if u.len() != x.len() {
            return Err(Error::Dimension { expected: x.len(), got: u.len() });
        }
        shifted.clear();
        shifted.extend(x.iter().zip(u).map(|(a, b)| a + self.mu * b));
        let upper = self.evaluate_with(shifted, xi)?;
        let base = self.evaluate_with(x, xi)?;
        let q = (upper - base) / self.mu;
        if !q.is_finite() {
            return Err(Error::Numerical { value: q, iterate: x.to_vec() });
        }
        Ok(q)
    }

    /// `G_mu(x, xi, u)` for a given direction and noise draw.
    pub fn estimate_with(&self, x: &[f64], u: &[f64], xi: &NoiseDraw) -> Result<Vec<f64>> {
        let q = self.difference_quotient(x, u, xi)?;
        Ok(u.iter().map(|v| q * v).collect())
    }

    /// `G_mu(x, xi, u)` with `u` and `xi` drawn from `stream` (direction first).
    /// The same `xi` enters both evaluations.
    pub fn gsmooth_estimate(&self, x: &[f64], stream: &RngStream) -> Result<Vec<f64>> {
        self.layout.check_len(x)?;
        let mut rng = stream.rng();
        let u = gaussian_vec(&mut rng, x.len());
        let xi = self.noise.draw(&mut rng, x.len());
        self.estimate_with(x, &u, &xi)
    }

    /// Block `s` of the mean of `batch` estimators; sample `t` uses `stream.derive(t)`.
    pub fn batch_block_estimate(&self, x: &[f64], s: usize, batch: usize, stream: &RngStream) -> Result<Vec<f64>> {
        self.layout.check_len(x)?;
        let range = self.layout.range(s)?;
        if batch == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        let mut acc = vec![0.0; range.len()];
        let mut shifted = Vec::with_capacity(x.len());
        for t in 0..batch {
            let mut rng = stream.derive(t as u64).rng();
            let u = gaussian_vec(&mut rng, x.len());
            let xi = self.noise.draw(&mut rng, x.len());
            let q = self.quotient_into(x, &u, &xi, &mut shifted)?;
            for (a, v) in acc.iter_mut().zip(&u[range.clone()]) {
                *a += q * v;
            }
        }
        let inv = 1.0 / batch as f64;
        acc.iter_mut().for_each(|a| *a *= inv);
        Ok(acc)
    }

    /// Full-vector mean of `samples` estimators, sample `t` from `stream.derive(t)`.
    pub fn batch_estimate(&self, x: &[f64], samples: usize, stream: &RngStream) -> Result<Vec<f64>> {
        self.layout.check_len(x)?;
        if samples == 0 {
            return Err(Error::Config("sample size must be at least 1".into()));
        }
        let mut acc = vec![0.0; x.len()];
        let mut shifted = Vec::with_capacity(x.len());
        for t in 0..samples {
            let mut rng = stream.derive(t as u64).rng();
            let u = gaussian_vec(&mut rng, x.len());
            let xi = self.noise.draw(&mut rng, x.len());
            let q = self.quotient_into(x, &u, &xi, &mut shifted)?;
            for (a, v) in acc.iter_mut().zip(&u) {
                *a += q * v;
            }
        }
        let inv = 1.0 / samples as f64;
        acc.iter_mut().for_each(|a| *a *= inv);
        Ok(acc)
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
}

impl McEstimate {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var =
            if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        Self { mean, std_err: (var / n).sqrt() }
    }
}

/// Monte-Carlo estimate of `f_mu(x) = E f(x + mu u)` on the deterministic objective.
/// Test and diagnostic use only; never called by solvers.
pub fn smoothed_value_mc(
    objective: &dyn Objective,
    x: &[f64],
    mu: f64,
    samples: usize,
    stream: &RngStream,
) -> McEstimate {
    let values: Vec<f64> = (0..samples)
        .map(|t| {
            let u = gaussian_vec(&mut stream.derive(t as u64).rng(), x.len());
            let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + mu * b).collect();
            objective.value(&y)
        })
        .collect();
    McEstimate::from_samples(&values)
}

/// Monte-Carlo estimate of `grad f_mu(x)` through the symmetric quotient
/// `[f(x + mu u) - f(x - mu u)] / (2 mu) * u`, which shares the expectation of
/// the forward estimator but not its sample path.
pub fn smoothed_grad_mc(
    objective: &dyn Objective,
    x: &[f64],
    mu: f64,
    samples: usize,
    stream: &RngStream,
) -> Vec<McEstimate> {
    let n = x.len();
    let mut per_coord = vec![Vec::with_capacity(samples); n];
    for t in 0..samples {
        let u = gaussian_vec(&mut stream.derive(t as u64).rng(), n);
        let plus: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + mu * b).collect();
        let minus: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a - mu * b).collect();
        let q = (objective.value(&plus) - objective.value(&minus)) / (2.0 * mu);
        for (c, v) in per_coord.iter_mut().zip(&u) {
            c.push(q * v);
        }
    }
    per_coord.iter().map(|c| McEstimate::from_samples(c)).collect()
}
