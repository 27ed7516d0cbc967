//! Parameter rules from the complexity corollaries.
//!
//! Each function is a literal transcription of a displayed formula; inputs are
//! taken as given and no clamping is applied beyond what the formula states.
//! Integer quantities are rounded up where the formula has a ceiling, and
//! iteration counts are at least one.

use serde::{Deserialize, Serialize};

/// Stepsize and smoothing cap for ZS-BCD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcdSchedule {
    pub alpha: f64,
    pub mu_cap: f64,
}

/// Nonconvex ZS-BCD with uniform blocks:
/// `alpha = min{D~ / (sigma sqrt T), 1 / (4 L^ (n+4))} / sqrt(n+4)`,
/// `mu <= D_f / (n+4) * sqrt(1/T)`.
pub fn bcd_corollary(n: usize, t: usize, sigma: f64, l_hat: f64, d_tilde: f64, d_f: f64) -> BcdSchedule {
    let n4 = n as f64 + 4.0;
    let tf = t as f64;
    let alpha = (d_tilde / (sigma * tf.sqrt())).min(1.0 / (4.0 * l_hat * n4)) / n4.sqrt();
    BcdSchedule { alpha, mu_cap: d_f / n4 * (1.0 / tf).sqrt() }
}

/// The `D~` minimizing the nonconvex ZS-BCD rate: `sqrt(3 L_f / (2 L^)) D_f`.
pub fn bcd_optimal_d_tilde(l_f: f64, l_hat: f64, d_f: f64) -> f64 {
    (3.0 * l_f / (2.0 * l_hat)).sqrt() * d_f
}

/// Convex ZS-BCD: `alpha = min{D~ / (sigma sqrt T), 1 / (8 L_f (n+5))} / sqrt(n+5)`,
/// `mu <= D_{p,X} / sqrt(n+5)`.
pub fn bcd_convex(n: usize, t: usize, sigma: f64, l_f: f64, d_tilde: f64, d_px: f64) -> BcdSchedule {
    let n5 = n as f64 + 5.0;
    let alpha = (d_tilde / (sigma * (t as f64).sqrt())).min(1.0 / (8.0 * l_f * n5)) / n5.sqrt();
    BcdSchedule { alpha, mu_cap: d_px / n5.sqrt() }
}

/// Batch size, iteration count, stepsize and smoothing cap derived from a call budget `T~`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSchedule {
    /// `T'`.
    pub batch: usize,
    /// `T = floor(T~ / T')`, at least one.
    pub iterations: usize,
    pub alpha: f64,
    pub mu_cap: f64,
    /// `delta_k`, approximate variant only.
    pub delta: Option<f64>,
}

fn budget_iterations(t_tilde: u64, batch: usize) -> usize {
    ((t_tilde / batch as u64) as usize).max(1)
}

fn ceil_count(v: f64) -> usize {
    (v.ceil() as usize).max(1)
}

/// ZS-BMD with `alpha = 1/L^`:
/// `T' = ceil(min{max{sqrt((n+4)(2M^2+sigma^2) T~) / (L~ D~), n+4}, T~})`,
/// `mu <= D_Phi / (n+4) * sqrt(1/T~)`.
pub fn bmd_budget(
    n: usize,
    t_tilde: u64,
    m: f64,
    sigma: f64,
    l_hat: f64,
    l_tilde: f64,
    d_tilde: f64,
    d_phi: f64,
) -> BudgetSchedule {
    let n4 = n as f64 + 4.0;
    let tt = t_tilde as f64;
    let noise = 2.0 * m * m + sigma * sigma;
    let batch = ceil_count(((n4 * noise * tt).sqrt() / (l_tilde * d_tilde)).max(n4).min(tt));
    BudgetSchedule {
        batch,
        iterations: budget_iterations(t_tilde, batch),
        alpha: 1.0 / l_hat,
        mu_cap: d_phi / n4 * (1.0 / tt).sqrt(),
        delta: None,
    }
}

/// `omega_L = L^ / L-check + 2`.
pub fn omega_l(l_hat: f64, l_check: f64) -> f64 {
    l_hat / l_check + 2.0
}

/// Approximate ZS-BCCG with `alpha = 1/(2 L^)` and `delta = 1/(3T)`:
/// `T' = ceil(min{max{omega sqrt((n+4)(2M^2+sigma^2) T~) / D~, omega (n+4)}, T~})`,
/// `mu <= D_Phi / (n+4) * sqrt(b / T~)`.
#[allow(clippy::too_many_arguments)]
pub fn bccg_approx_budget(
    n: usize,
    b: usize,
    t_tilde: u64,
    m: f64,
    sigma: f64,
    l_hat: f64,
    l_check: f64,
    d_tilde: f64,
    d_phi: f64,
) -> BudgetSchedule {
    let n4 = n as f64 + 4.0;
    let tt = t_tilde as f64;
    let w = omega_l(l_hat, l_check);
    let noise = 2.0 * m * m + sigma * sigma;
    let batch = ceil_count((w * (n4 * noise * tt).sqrt() / d_tilde).max(w * n4).min(tt));
    let iterations = budget_iterations(t_tilde, batch);
    BudgetSchedule {
        batch,
        iterations,
        alpha: approx_alpha(l_hat),
        mu_cap: d_phi / n4 * (b as f64 / tt).sqrt(),
        delta: Some(approx_delta(iterations)),
    }
}

/// `alpha_k = 1 / (2 L^)` for approximate ZS-BCCG.
pub fn approx_alpha(l_hat: f64) -> f64 {
    1.0 / (2.0 * l_hat)
}

/// `delta_k = 1 / (3T)` for approximate ZS-BCCG.
pub fn approx_delta(t: usize) -> f64 {
    1.0 / (3.0 * t as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositeCgSchedule {
    pub mu: f64,
    pub alpha: f64,
    /// `T_k`, rounded up.
    pub batch: usize,
}

/// ZS-BCCG' with uniform blocks:
/// `mu = [2 L-check sqrt(2M^2+sigma^2) / (5 L_f^2 (n+4)^3)]^(1/2)`, `alpha = 1/sqrt T`,
/// `T_k = 2 (n+4) sqrt(2M^2+sigma^2) T / L-check`.
pub fn bccg_composite_corollary(n: usize, t: usize, m: f64, sigma: f64, l_f: f64, l_check: f64) -> CompositeCgSchedule {
    let n4 = n as f64 + 4.0;
    let root = (2.0 * m * m + sigma * sigma).sqrt();
    CompositeCgSchedule {
        mu: (2.0 * l_check * root / (5.0 * l_f * l_f * n4.powi(3))).sqrt(),
        alpha: 1.0 / (t as f64).sqrt(),
        batch: ceil_count(2.0 * n4 * root * t as f64 / l_check),
    }
}

/// Which two-phase parameter rule to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoPhaseVariant {
    Bmd,
    Bccg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPhaseInputs {
    pub epsilon: f64,
    pub lambda: f64,
    pub n: usize,
    pub b: usize,
    pub m: f64,
    pub sigma: f64,
    pub l_f: f64,
    pub l_hat: f64,
    pub l_check: f64,
    pub d_phi: f64,
    pub d_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPhaseParameters {
    /// `S`, number of runs.
    pub runs: usize,
    /// `T~`, calls per run.
    pub total_calls: u64,
    /// `𝒯`, post-optimization sample size.
    pub post_samples: u64,
}

/// `S = ceil(log2(2 / Lambda))`.
pub fn runs_for_confidence(lambda: f64) -> usize {
    ((2.0 / lambda).log2().ceil() as usize).max(1)
}

/// `(S, T~, 𝒯)` for a target `(epsilon, Lambda)`.
pub fn two_phase_parameters(variant: TwoPhaseVariant, p: &TwoPhaseInputs) -> TwoPhaseParameters {
    let n4 = p.n as f64 + 4.0;
    let b = p.b as f64;
    let eps = p.epsilon;
    let noise = 2.0 * p.m * p.m + p.sigma * p.sigma;
    let root = (n4 * noise).sqrt();
    let runs = runs_for_confidence(p.lambda);

    let t_tilde = match variant {
        TwoPhaseVariant::Bmd => {
            let lt = p.l_f.max(p.l_hat);
            let d = p.d_tilde;
            let terms = [
                n4,
                n4 * noise / (lt * lt * d * d),
                99.0 * 64.0 * n4 * b * lt * lt * p.d_phi * p.d_phi / eps,
                (66.0 * 32.0 * b * root / eps * (d + p.d_phi * p.d_phi / d)).powi(2),
            ];
            terms.into_iter().fold(f64::NEG_INFINITY, f64::max)
        }
        TwoPhaseVariant::Bccg => {
            let w = omega_l(p.l_hat, p.l_check);
            let d = p.d_tilde;
            let dp2 = p.d_phi * p.d_phi;
            let lead = p.l_hat * p.l_hat * dp2 + p.l_hat;
            let terms = [
                w * n4,
                w * w * n4 * noise / (d * d),
                64.0 * w * b * n4 * (17.0 * p.l_f * p.l_f * dp2 + 8.0 * lead) / eps,
                b * b * w * w * (8.0 * 32.0 * root / eps * (2.0 * d + lead / d)).powi(2),
            ];
            terms.into_iter().fold(f64::NEG_INFINITY, f64::max)
        }
    };
    let post = 32.0 * n4 * 2.0 * (runs as f64 + 1.0) / p.lambda * (16.0 * noise / eps).max(1.0);
    TwoPhaseParameters { runs, total_calls: t_tilde.ceil() as u64, post_samples: post.ceil() as u64 }
}
