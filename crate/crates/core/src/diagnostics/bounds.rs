//! Right-hand sides of the convergence bounds, transcribed term by term.
//!
//! Constants are kept as printed, including the places where one bound uses
//! `(n+3)^3` and another `(n+4)^2`. [`bound_rhs`] returns the displayed
//! right-hand side; [`BoundId::metric_bound`] rescales it to a bound on the
//! expected metric when the left-hand side is a multiple of one.

use serde::{Deserialize, Serialize};

use super::MetricKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// `E||grad f(x_R)||^2 / L_f` for ZS-BCD with general stepsizes.
    BcdNonconvex,
    /// `B_T` with `E||grad f(x_R)||^2 <= b L_f B_T` under the ZS-BCD corollary stepsizes.
    BcdRate,
    /// `E[f(x_R) - f*]` for convex ZS-BCD.
    BcdConvex,
    /// Order of the convex ZS-BCD rate, `sigma D sqrt(n) / sqrt(T) + n D^2 L_f / T`, no constant.
    BcdConvexRate,
    /// `E||P||^2` for ZS-BMD with general stepsizes and batches.
    BmdGeneral,
    /// `E||P||^2` for ZS-BMD with `alpha = 1/L^`, uniform blocks, `T_k = T'`.
    BmdConstantStep,
    /// `B_T~` with `E||P||^2 / (L~ b) <= B_T~`.
    BmdBudget,
    /// Threshold of the two-phase ZS-BMD probability estimate.
    BmdTwoPhase,
    /// `E[g_X^R]` for ZS-BCCG.
    CgSmooth,
    /// `E[gbar_X^R]` for ZS-BCCG'.
    CgComposite,
    /// `E||P||^2` for approximate ZS-BCCG with general parameters.
    ApproxGeneral,
    /// `E||P||^2` for approximate ZS-BCCG with `alpha = 1/(2L^)`, `delta = 1/(3T)`.
    ApproxConstantStep,
    /// `C_T~` with `E||P||^2 / (omega_L b) <= C_T~`.
    ApproxBudget,
    /// Threshold of the two-phase ZS-BCCG probability estimate.
    CgTwoPhase,
}

impl BoundId {
    pub const ALL: [BoundId; 14] = [
        BoundId::BcdNonconvex,
        BoundId::BcdRate,
        BoundId::BcdConvex,
        BoundId::BcdConvexRate,
        BoundId::BmdGeneral,
        BoundId::BmdConstantStep,
        BoundId::BmdBudget,
        BoundId::BmdTwoPhase,
        BoundId::CgSmooth,
        BoundId::CgComposite,
        BoundId::ApproxGeneral,
        BoundId::ApproxConstantStep,
        BoundId::ApproxBudget,
        BoundId::CgTwoPhase,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundId::BcdNonconvex => "bcd_nonconvex",
            BoundId::BcdRate => "bcd_rate",
            BoundId::BcdConvex => "bcd_convex",
            BoundId::BcdConvexRate => "bcd_convex_rate",
            BoundId::BmdGeneral => "bmd_general",
            BoundId::BmdConstantStep => "bmd_constant_step",
            BoundId::BmdBudget => "bmd_budget",
            BoundId::BmdTwoPhase => "bmd_two_phase",
            BoundId::CgSmooth => "cg_smooth",
            BoundId::CgComposite => "cg_composite",
            BoundId::ApproxGeneral => "approx_general",
            BoundId::ApproxConstantStep => "approx_constant_step",
            BoundId::ApproxBudget => "approx_budget",
            BoundId::CgTwoPhase => "cg_two_phase",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| Error::Unknown { kind: "bound", name: name.to_string() })
    }

    /// The metric whose expectation the bound controls, if any.
    pub fn metric(&self) -> Option<MetricKind> {
        match self {
            BoundId::BcdNonconvex | BoundId::BcdRate => Some(MetricKind::GradMappingSq),
            BoundId::BcdConvex => Some(MetricKind::Suboptimality),
            BoundId::BcdConvexRate | BoundId::BmdTwoPhase | BoundId::CgTwoPhase => None,
            BoundId::CgSmooth => Some(MetricKind::FwGap),
            BoundId::CgComposite => Some(MetricKind::GenFwGap),
            BoundId::BmdGeneral
            | BoundId::BmdConstantStep
            | BoundId::BmdBudget
            | BoundId::ApproxGeneral
            | BoundId::ApproxConstantStep
            | BoundId::ApproxBudget => Some(MetricKind::GradMappingSq),
        }
    }

    /// Bound on the expected metric: the displayed right-hand side times the
    /// factor dividing the left-hand side.
    pub fn metric_bound(&self, inputs: &BoundInputs) -> Result<Option<(MetricKind, f64)>> {
        let Some(metric) = self.metric() else { return Ok(None) };
        let rhs = bound_rhs(*self, inputs)?;
        let v = match self {
            BoundId::BcdNonconvex => inputs.l_f()? * rhs,
            BoundId::BcdRate => inputs.b()? * inputs.l_f()? * rhs,
            BoundId::BmdBudget => inputs.l_tilde()? * inputs.b()? * rhs,
            BoundId::ApproxBudget => inputs.omega()? * inputs.b()? * rhs,
            _ => rhs,
        };
        Ok(Some((metric, v)))
    }
}

/// Constants consumed by the bounds. Anything a bound needs but is absent is
/// reported as [`Error::MissingConstant`]. `sigma~^2`, `omega_L`, `L~`,
/// `gamma`, `kappa` and the variance constant of the two-phase estimate are
/// always recomputed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub n: Option<f64>,
    pub b: Option<f64>,
    /// Iterations `T`.
    pub t: Option<f64>,
    /// Constant batch size `T'`.
    pub t_batch: Option<f64>,
    /// Call budget `T~`.
    pub t_tilde: Option<f64>,
    /// Post-optimization sample size `𝒯`.
    pub post_samples: Option<f64>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    /// Gradient bound `M`.
    pub m: Option<f64>,
    pub l_f: Option<f64>,
    pub l_hat: Option<f64>,
    pub l_check: Option<f64>,
    pub d_f: Option<f64>,
    pub d_phi: Option<f64>,
    /// Weighted initial distance `D_{p,X}` (not squared).
    pub d_px: Option<f64>,
    pub d_tilde: Option<f64>,
    /// `Phi(x_1) - Phi*` (or `f(z_1) - f*`).
    pub phi_gap: Option<f64>,
    /// `Phi_mu(x_1) - Phi_mu*`; defaults to `phi_gap + mu^2 L_f n / 2`, an upper bound.
    pub phi_mu_gap: Option<f64>,
    /// Number of runs `S`.
    pub runs: Option<f64>,
    /// Free parameter `lambda` of the probability estimates.
    pub lambda: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    pub batches: Option<Vec<f64>>,
    pub deltas: Option<Vec<f64>>,
    pub probs: Option<Vec<f64>>,
    /// `L_s` per block.
    pub block_l: Option<Vec<f64>>,
    /// `D_{X_s}` per block.
    pub diameters: Option<Vec<f64>>,
}

macro_rules! getter {
    ($name:ident, $label:literal) => {
        pub fn $name(&self) -> Result<f64> {
            self.$name.ok_or(Error::MissingConstant($label))
        }
    };
}

macro_rules! vec_getter {
    ($name:ident, $label:literal) => {
        pub fn $name(&self) -> Result<&[f64]> {
            self.$name.as_deref().ok_or(Error::MissingConstant($label))
        }
    };
}

impl BoundInputs {
    getter!(n, "n");
    getter!(b, "b");
    getter!(t, "T");
    getter!(t_batch, "T'");
    getter!(t_tilde, "T~");
    getter!(post_samples, "post-optimization sample size");
    getter!(mu, "mu");
    getter!(sigma, "sigma");
    getter!(m, "M");
    getter!(l_f, "L_f");
    getter!(l_hat, "L^");
    getter!(l_check, "L-check");
    getter!(d_f, "D_f");
    getter!(d_phi, "D_Phi");
    getter!(d_px, "D_{p,X}");
    getter!(d_tilde, "D~");
    getter!(phi_gap, "Phi(x_1) - Phi*");
    getter!(runs, "S");
    getter!(lambda, "lambda");
    vec_getter!(alphas, "stepsizes");
    vec_getter!(batches, "batch sizes");
    vec_getter!(deltas, "approximation parameters");
    vec_getter!(probs, "block probabilities");
    vec_getter!(block_l, "block Lipschitz constants");
    vec_getter!(diameters, "block diameters");

    /// `L~ = max(L_f, L^)`.
    pub fn l_tilde(&self) -> Result<f64> {
        Ok(self.l_f()?.max(self.l_hat()?))
    }

    /// `omega_L = L^ / L-check + 2`.
    pub fn omega(&self) -> Result<f64> {
        Ok(self.l_hat()? / self.l_check()? + 2.0)
    }

    pub fn sigma_tilde_sq(&self) -> Result<f64> {
        Ok(sigma_tilde_sq(self.n()?, self.m()?, self.sigma()?, self.mu()?, self.l_f()?))
    }

    fn phi_mu_gap(&self) -> Result<f64> {
        match self.phi_mu_gap {
            Some(v) => Ok(v),
            None => Ok(self.phi_gap()? + 0.5 * self.mu()?.powi(2) * self.l_f()? * self.n()?),
        }
    }

    /// `2M^2 + sigma^2`.
    fn noise(&self) -> Result<f64> {
        Ok(2.0 * self.m()?.powi(2) + self.sigma()?.powi(2))
    }

    fn per_block(&self) -> Result<(&[f64], &[f64])> {
        let (p, l) = (self.probs()?, self.block_l()?);
        if p.len() != l.len() {
            return Err(Error::Dimension { expected: p.len(), got: l.len() });
        }
        Ok((p, l))
    }

    fn schedule_pair(&self) -> Result<(&[f64], &[f64])> {
        let (a, t) = (self.alphas()?, self.batches()?);
        if a.len() != t.len() {
            return Err(Error::Dimension { expected: a.len(), got: t.len() });
        }
        Ok((a, t))
    }
}

/// `sigma~^2 = 4 (n+4) [2M^2 + sigma^2 + mu^2 L_f^2 (n+4)^2]`.
pub fn sigma_tilde_sq(n: f64, m: f64, sigma: f64, mu: f64, l_f: f64) -> f64 {
    4.0 * (n + 4.0) * (2.0 * m * m + sigma * sigma + mu * mu * l_f * l_f * (n + 4.0).powi(2))
}

/// Right side of the two-phase probability estimates: `(S+1)/lambda + 2^{-S}`.
pub fn two_phase_failure_probability(runs: f64, lambda: f64) -> f64 {
    (runs + 1.0) / lambda + 0.5f64.powf(runs)
}

fn fmin(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn fmax(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::NEG_INFINITY, f64::max)
}

/// Displayed right-hand side of bound `id`.
pub fn bound_rhs(id: BoundId, i: &BoundInputs) -> Result<f64> {
    match id {
        BoundId::BcdNonconvex => {
            let (n, lf, df, sigma, mu) = (i.n()?, i.l_f()?, i.d_f()?, i.sigma()?, i.mu()?);
            let (p, l) = i.per_block()?;
            let alphas = i.alphas()?;
            let pmin = fmin(p);
            let pl = fmax(p.iter().zip(l).map(|(a, b)| a * b));
            let den: f64 = alphas.iter().map(|a| a * (pmin - 2.0 * (n + 4.0) * pl * a)).sum();
            let sum_a2: f64 = alphas.iter().map(|a| a * a).sum();
            let mixed: f64 = alphas.iter().map(|a| pmin / 4.0 * a + pl * a * a).sum();
            let num = df * df
                + 2.0 * pl / lf * (n + 4.0) * sigma * sigma * sum_a2
                + 2.0 * mu * mu * (n + 4.0) * (1.0 + lf * (n + 4.0).powi(2) * mixed);
            Ok(num / den)
        }
        BoundId::BcdRate => {
            let (n, t, sigma, lf, lh, dt, df) =
                (i.n()?, i.t()?, i.sigma()?, i.l_f()?, i.l_hat()?, i.d_tilde()?, i.d_f()?);
            Ok(2.0 * sigma * (n + 4.0).sqrt() / t.sqrt() * (2.0 * lh / lf * dt + 3.0 * df * df / dt)
                + df * df * (24.0 * lh + 2.0 * lf) * (n + 4.0) / t)
        }
        BoundId::BcdConvex => {
            let (n, lf, d, sigma, mu) = (i.n()?, i.l_f()?, i.d_px()?, i.sigma()?, i.mu()?);
            let alphas = i.alphas()?;
            let n5 = n + 5.0;
            let den: f64 = 2.0 * alphas.iter().map(|a| a - 4.0 * n5 * lf * a * a).sum::<f64>();
            let sum_a: f64 = alphas.iter().sum();
            let sum_a2: f64 = alphas.iter().map(|a| a * a).sum();
            let num = d * d
                + 2.0 * mu * mu * lf * n5 * sum_a
                + 8.0 * n5 * (mu * mu * lf * lf * n5.powi(3) + mu * mu * lf * lf * n5 + sigma * sigma) * sum_a2;
            Ok(num / den)
        }
        BoundId::BcdConvexRate => {
            let (n, t, sigma, d, lf) = (i.n()?, i.t()?, i.sigma()?, i.d_px()?, i.l_f()?);
            Ok(sigma * d * n.sqrt() / t.sqrt() + n * d * d * lf / t)
        }
        BoundId::BmdGeneral => {
            let (n, lf, mu) = (i.n()?, i.l_f()?, i.mu()?);
            let (p, l) = i.per_block()?;
            let (alphas, batches) = i.schedule_pair()?;
            let st = i.sigma_tilde_sq()?;
            let pmax = fmax(p.iter().cloned());
            let ratio: f64 = alphas.iter().zip(batches).map(|(a, t)| a / t).sum();
            let den: f64 = alphas
                .iter()
                .map(|a| a * fmin(&p.iter().zip(l).map(|(ps, ls)| ps * (1.0 - ls / 2.0 * a)).collect::<Vec<_>>()))
                .sum();
            Ok((4.0 * i.phi_mu_gap()? + 8.0 * pmax * st * ratio) / den + mu * mu / 2.0 * lf * lf * (n + 3.0).powi(3))
        }
        BoundId::BmdConstantStep => {
            let (n, b, t, tb, lf, lh, dp, mu) =
                (i.n()?, i.b()?, i.t()?, i.t_batch()?, i.l_f()?, i.l_hat()?, i.d_phi()?, i.mu()?);
            let st = i.sigma_tilde_sq()?;
            Ok((8.0 * b * lh * lh * dp * dp + 8.0 * mu * mu * lf * lf * n * b) / t
                + 16.0 * st * b / tb
                + mu * mu / 2.0 * lf * lf * (n + 3.0).powi(3))
        }
        BoundId::BmdBudget => {
            let (n, tt, dt, dp) = (i.n()?, i.t_tilde()?, i.d_tilde()?, i.d_phi()?);
            let lt = i.l_tilde()?;
            let root = ((n + 4.0) * i.noise()?).sqrt();
            let g1 = (root / (lt * dt * tt.sqrt())).max(1.0);
            let g2 = ((n + 4.0) / tt).max(1.0);
            Ok(64.0 * root / tt.sqrt() * (dt * g1 + dp * dp / dt) + (64.0 * g2 + 33.0) * lt * dp * dp * (n + 4.0) / tt)
        }
        BoundId::BmdTwoPhase => {
            let (n, b, tt, post, lf, dp, lam) =
                (i.n()?, i.b()?, i.t_tilde()?, i.post_samples()?, i.l_f()?, i.d_phi()?, i.lambda()?);
            let bt = bound_rhs(BoundId::BmdBudget, i)?;
            Ok(16.0 * b * i.l_tilde()? * bt
                + 3.0 * dp * dp * lf * lf * b * (n + 4.0) / tt
                + 32.0 * (n + 4.0) * lam / post * (i.noise()? + dp * dp * lf * lf * b / tt))
        }
        BoundId::CgSmooth | BoundId::CgComposite => {
            let (n, lf, mu) = (i.n()?, i.l_f()?, i.mu()?);
            let (p, l) = i.per_block()?;
            let d = i.diameters()?;
            if d.len() != p.len() {
                return Err(Error::Dimension { expected: p.len(), got: d.len() });
            }
            let (alphas, batches) = i.schedule_pair()?;
            let st = i.sigma_tilde_sq()?;
            let pld: f64 = p.iter().zip(l).zip(d).map(|((ps, ls), ds)| ps * ls * ds).sum();
            let p_over_l = fmax(p.iter().zip(l).map(|(ps, ls)| ps / ls));
            let sum_a: f64 = alphas.iter().sum();
            let sum_a2: f64 = alphas.iter().map(|a| a * a).sum();
            let noise: f64 = batches.iter().map(|t| st / t + mu * mu / 4.0 * lf * lf * (n + 3.0).powi(3)).sum();
            Ok((i.phi_gap()? + pld * sum_a2 + p_over_l * noise) / (fmin(p) * sum_a))
        }
        BoundId::ApproxGeneral => {
            let (n, lf, mu) = (i.n()?, i.l_f()?, i.mu()?);
            let (p, l) = i.per_block()?;
            let (alphas, batches) = i.schedule_pair()?;
            let deltas = i.deltas()?;
            if deltas.len() != alphas.len() {
                return Err(Error::Dimension { expected: alphas.len(), got: deltas.len() });
            }
            let st = i.sigma_tilde_sq()?;
            let bias = mu * mu / 2.0 * lf * lf * (n + 3.0).powi(3);
            let mut num = 2.0 * i.phi_gap()? + 6.0 * deltas.iter().sum::<f64>();
            let mut den = 0.0;
            for (a, t) in alphas.iter().zip(batches) {
                let w = fmax(p.iter().zip(l).map(|(ps, ls)| ps * (1.0 / ls + 4.0 * a)));
                num += w * (2.0 * st / t + bias);
                den += a * fmin(&p.iter().zip(l).map(|(ps, ls)| ps * (1.0 - ls * a)).collect::<Vec<_>>());
            }
            Ok(num / den)
        }
        BoundId::ApproxConstantStep => {
            let (n, b, t, tb, lf, lh, lc, dp, mu) =
                (i.n()?, i.b()?, i.t()?, i.t_batch()?, i.l_f()?, i.l_hat()?, i.l_check()?, i.d_phi()?, i.mu()?);
            let st = i.sigma_tilde_sq()?;
            Ok((4.0 * b * lh * lh * dp * dp + 4.0 * b * lh) / t
                + (4.0 * lh / lc + 8.0) * st / tb
                + (lh / lc + 2.0) * mu * mu * lf * lf * (n + 3.0).powi(3))
        }
        BoundId::ApproxBudget => {
            let (n, tt, dt, dp, lf, lh) = (i.n()?, i.t_tilde()?, i.d_tilde()?, i.d_phi()?, i.l_f()?, i.l_hat()?);
            let w = i.omega()?;
            let root = ((n + 4.0) * i.noise()?).sqrt();
            let k1 = (w * root / (dt * tt.sqrt())).max(1.0);
            let k2 = (w * (n + 4.0) / tt).max(1.0);
            let lead = lh * lh * dp * dp + lh;
            Ok(8.0 * root / tt.sqrt() * (2.0 * k1 * dt + lead / dt)
                + ((16.0 * k2 + 1.0) * lf * lf * dp * dp + 8.0 * lead) * (n + 4.0) / tt)
        }
        BoundId::CgTwoPhase => {
            let (n, b, tt, post, lf, dp, lam) =
                (i.n()?, i.b()?, i.t_tilde()?, i.post_samples()?, i.l_f()?, i.d_phi()?, i.lambda()?);
            let ct = bound_rhs(BoundId::ApproxBudget, i)?;
            Ok(16.0 * b * i.omega()? * ct
                + 3.0 * dp * dp * lf * lf * b * (n + 4.0) / tt
                + 32.0 * (n + 4.0) * lam / post * (i.noise()? + dp * dp * lf * lf * b / tt))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> BoundInputs {
        BoundInputs {
            n: Some(12.0),
            b: Some(4.0),
            t: Some(100.0),
            t_batch: Some(50.0),
            t_tilde: Some(1e4),
            post_samples: Some(1000.0),
            mu: Some(0.01),
            sigma: Some(1.0),
            m: Some(1.0),
            l_f: Some(2.0),
            l_hat: Some(1.5),
            l_check: Some(0.5),
            d_f: Some(1.0),
            d_phi: Some(1.0),
            d_px: Some(1.0),
            d_tilde: Some(1.0),
            phi_gap: Some(1.0),
            runs: Some(3.0),
            lambda: Some(10.0),
            alphas: Some(vec![0.001; 10]),
            batches: Some(vec![5.0; 10]),
            deltas: Some(vec![0.01; 10]),
            probs: Some(vec![0.25; 4]),
            block_l: Some(vec![1.5, 1.0, 0.5, 1.0]),
            diameters: Some(vec![2.0; 4]),
            phi_mu_gap: None,
        }
    }

    #[test]
    fn sigma_tilde_example() {
        assert_eq!(sigma_tilde_sq(12.0, 1.0, 1.0, 0.0, 5.0), 192.0);
    }

    #[test]
    fn constant_step_bmd_vanishes_in_the_limit() {
        let mut i = base();
        i.mu = Some(0.0);
        i.t = Some(f64::INFINITY);
        i.t_batch = Some(f64::INFINITY);
        assert_eq!(bound_rhs(BoundId::BmdConstantStep, &i).unwrap(), 0.0);
    }

    #[test]
    fn approx_constant_step_noise_coefficient() {
        // with L^ = L-check the sigma~^2 / T' coefficient is 4 + 8 = 12
        let mut i = base();
        i.l_hat = Some(1.0);
        i.l_check = Some(1.0);
        i.mu = Some(0.0);
        i.t = Some(f64::INFINITY);
        i.t_batch = Some(1.0);
        let st = i.sigma_tilde_sq().unwrap();
        assert_eq!(bound_rhs(BoundId::ApproxConstantStep, &i).unwrap(), 12.0 * st);
    }

    #[test]
    fn every_bound_evaluates_and_is_positive() {
        let i = base();
        for id in BoundId::ALL {
            let v = bound_rhs(id, &i).unwrap_or_else(|e| panic!("{id:?}: {e}"));
            assert!(v.is_finite() && v > 0.0, "{id:?} = {v}");
            assert_eq!(BoundId::from_name(id.name()).unwrap(), id);
        }
    }

    #[test]
    fn missing_constant_is_named() {
        let mut i = base();
        i.d_phi = None;
        assert_eq!(bound_rhs(BoundId::BmdConstantStep, &i), Err(Error::MissingConstant("D_Phi")));
        let mut i = base();
        i.diameters = None;
        assert_eq!(bound_rhs(BoundId::CgComposite, &i), Err(Error::MissingConstant("block diameters")));
    }

    #[test]
    fn monotone_in_the_stated_directions() {
        let at = |f: &dyn Fn(&mut BoundInputs), id| {
            let mut i = base();
            f(&mut i);
            bound_rhs(id, &i).unwrap()
        };
        for id in [BoundId::BmdConstantStep, BoundId::ApproxConstantStep] {
            let t: Vec<f64> = [50.0, 100.0, 200.0].iter().map(|v| at(&|i| i.t = Some(*v), id)).collect();
            let tb: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|v| at(&|i| i.t_batch = Some(*v), id)).collect();
            let mu: Vec<f64> = [0.0, 0.01, 0.02].iter().map(|v| at(&|i| i.mu = Some(*v), id)).collect();
            assert!(t[0] > t[1] && t[1] > t[2]);
            assert!(tb[0] > tb[1] && tb[1] > tb[2]);
            assert!(mu[0] < mu[1] && mu[1] < mu[2]);
        }
        for id in [BoundId::BcdRate, BoundId::BmdBudget, BoundId::ApproxBudget, BoundId::BcdConvexRate] {
            let v: Vec<f64> = [1e3, 1e4, 1e5]
                .iter()
                .map(|x| {
                    at(
                        &|i| {
                            i.t = Some(*x);
                            i.t_tilde = Some(*x)
                        },
                        id,
                    )
                })
                .collect();
            assert!(v[0] > v[1] && v[1] > v[2], "{id:?}");
        }
        let phi: Vec<f64> =
            [0.5, 1.0, 2.0].iter().map(|v| at(&|i| i.phi_gap = Some(*v), BoundId::ApproxGeneral)).collect();
        assert!(phi[0] < phi[1] && phi[1] < phi[2]);
    }

    #[test]
    fn general_forms_reduce_to_constant_step_forms() {
        // uniform p, alpha = 1/L^, T_k = T': the general ZS-BMD bound is below the corollary
        let mut i = base();
        let t = 40usize;
        i.t = Some(t as f64);
        i.t_batch = Some(7.0);
        i.alphas = Some(vec![1.0 / 1.5; t]);
        i.batches = Some(vec![7.0; t]);
        i.phi_gap = Some(1.5);
        i.d_phi = Some(1.0);
        i.mu = Some(0.0);
        let general = bound_rhs(BoundId::BmdGeneral, &i).unwrap();
        let corollary = bound_rhs(BoundId::BmdConstantStep, &i).unwrap();
        assert!(general <= corollary * (1.0 + 1e-12), "{general} {corollary}");
    }

    #[test]
    fn metric_scaling() {
        let i = base();
        let (m, v) = BoundId::BmdBudget.metric_bound(&i).unwrap().unwrap();
        assert_eq!(m, MetricKind::GradMappingSq);
        assert_eq!(v, 2.0 * 4.0 * bound_rhs(BoundId::BmdBudget, &i).unwrap());
        assert!(BoundId::BmdTwoPhase.metric_bound(&i).unwrap().is_none());
        assert_eq!(two_phase_failure_probability(1.0, 4.0), 1.0);
    }
}
