//! Turns an [`ExperimentConfig`] into concrete solver parameters, derived
//! constants and bound inputs. Everything here runs before any oracle call.

use serde::Serialize;
use zsbc::diagnostics::{BoundId, BoundInputs, MetricKind};
use zsbc::oracle::MU_FLOOR;
use zsbc::problems::{make_problem, TestProblem};
use zsbc::solvers::schedule::{
    approx_alpha, approx_delta, bccg_approx_budget, bccg_composite_corollary, bcd_convex, bcd_corollary,
    bcd_optimal_d_tilde, bmd_budget, runs_for_confidence, two_phase_parameters, TwoPhaseInputs, TwoPhaseVariant,
};
use zsbc::solvers::{validate, Algorithm, BcdVariant, Lipschitz, Schedule, SolverConfig, TwoPhaseConfig};

use crate::config::{locate, CountParam, ExperimentConfig, FloatParam, ScalarParam};
use crate::BenchError;

/// Where `Phi*` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimalValueSource {
    Exact,
    /// A certified lower bound; gaps and `D_Phi` computed from it are upper bounds.
    LowerBound,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct Constants {
    pub l_f: f64,
    pub l_hat: f64,
    pub l_check: f64,
    pub l_tilde: f64,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub sigma: f64,
    pub optimal_value: Option<f64>,
    pub optimal_value_source: OptimalValueSource,
    /// `Phi(x_1) - Phi*`.
    pub phi_gap: Option<f64>,
    /// `sqrt(2 (f(x_1) - f*) / L_f)`.
    pub d_f: Option<f64>,
    /// `sqrt((Phi(x_1) - Phi*) / L^)`.
    pub d_phi: Option<f64>,
    /// `sqrt(sum_s ||x_1 - x*||^2 / p_s)`.
    pub d_px: Option<f64>,
    pub d_tilde: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Range {
    pub first: f64,
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn of(v: &[f64]) -> Self {
        Self {
            first: v[0],
            min: v.iter().cloned().fold(f64::INFINITY, f64::min),
            max: v.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputSummary {
    pub steps: usize,
    pub support: usize,
    pub expected_index: f64,
    pub max_weight: f64,
    pub argmax: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoPhaseDerived {
    #[serde(rename = "S")]
    pub runs: usize,
    pub post_samples: usize,
    pub epsilon: Option<f64>,
    #[serde(rename = "Lambda")]
    pub confidence: Option<f64>,
    /// `T~` from the parameter rule, when `epsilon` and `Lambda` are both set.
    pub rule_budget: Option<u64>,
}

/// Every derived value, echoed into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub algorithm: &'static str,
    pub n: usize,
    pub blocks: usize,
    #[serde(rename = "T")]
    pub iterations: usize,
    pub budget: Option<u64>,
    pub stepsize: Range,
    pub stepsize_source: &'static str,
    pub batch: Range,
    pub total_samples: u64,
    /// `2 sum_k T_k` per run.
    pub calls_per_run: u64,
    pub mu: f64,
    pub mu_cap: Option<f64>,
    pub mu_source: &'static str,
    pub delta: Option<Range>,
    pub constants: Constants,
    pub output_distribution: OutputSummary,
    pub two_phase: Option<TwoPhaseDerived>,
    pub metrics: Vec<&'static str>,
    pub compare: Vec<&'static str>,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub problem: TestProblem,
    /// Template with `seed = master_seed`; replication `i` uses `master_seed + i`.
    pub base: SolverConfig,
    pub two_phase: Option<TwoPhaseConfig>,
    pub mu: f64,
    pub metrics: Vec<MetricKind>,
    pub compare: Vec<BoundId>,
    pub bound_inputs: BoundInputs,
    pub derived: Derived,
}

impl Resolved {
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.config.replications as u64).map(|i| self.config.master_seed.wrapping_add(i)).collect()
    }

    pub fn seed_config(&self, seed: u64) -> SolverConfig {
        let mut c = self.base.clone();
        c.seed = seed;
        c
    }

    pub fn probs(&self) -> Vec<f64> {
        self.base.block_probs.clone().unwrap_or_else(|| {
            let b = self.problem.layout().num_blocks();
            vec![1.0 / b as f64; b]
        })
    }
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn err(&self, section: &str, key: &str, msg: impl std::fmt::Display) -> BenchError {
        let at = match locate(self.src, section, key) {
            Some(line) => format!("line {line}, "),
            None => String::new(),
        };
        let name = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
        BenchError::Config(format!("{at}`{name}`: {msg}"))
    }
}

fn default_metric(algo: Algorithm, variant: BcdVariant) -> MetricKind {
    match algo {
        Algorithm::ZsBcd if variant == BcdVariant::Convex => MetricKind::Suboptimality,
        Algorithm::ZsBccgSmooth => MetricKind::FwGap,
        Algorithm::ZsBccgComposite => MetricKind::GenFwGap,
        _ => MetricKind::GradMappingSq,
    }
}

fn default_bound(algo: Algorithm, variant: BcdVariant) -> BoundId {
    match algo {
        Algorithm::ZsBcd if variant == BcdVariant::Convex => BoundId::BcdConvex,
        Algorithm::ZsBcd => BoundId::BcdNonconvex,
        Algorithm::ZsBmd => BoundId::BmdGeneral,
        Algorithm::ZsBccgSmooth => BoundId::CgSmooth,
        Algorithm::ZsBccgComposite => BoundId::CgComposite,
        Algorithm::ZsBccgApprox => BoundId::ApproxGeneral,
    }
}

fn float_list(p: &FloatParam) -> Option<Schedule<f64>> {
    match p {
        FloatParam::Rule(_) => None,
        FloatParam::Constant(v) => Some(Schedule::Constant(*v)),
        FloatParam::List(v) => Some(Schedule::List(v.clone())),
    }
}

pub fn resolve(config: ExperimentConfig, src: &str) -> Result<Resolved, BenchError> {
    let cx = Ctx { src };
    if config.replications == 0 {
        return Err(cx.err("", "replications", "need at least one replication"));
    }
    let problem = make_problem(&config.problem).map_err(|e| cx.err("problem", "name", e))?;
    let s = &config.solver;
    let algo = Algorithm::from_name(&s.algo).map_err(|e| cx.err("solver", "algo", e))?;
    let n = problem.dim();
    let b = problem.layout().num_blocks();
    let x1 = problem.x1().to_vec();

    let lipschitz: Lipschitz = match &s.lipschitz {
        Some(l) => Lipschitz::new(l.blocks.clone(), l.full).map_err(|e| cx.err("solver", "lipschitz", e))?,
        None => problem.lipschitz().clone(),
    };
    if lipschitz.blocks.len() != b {
        return Err(cx.err(
            "solver",
            "lipschitz",
            format!("{} block constants for {b} blocks", lipschitz.blocks.len()),
        ));
    }
    let (l_f, l_hat, l_check, l_tilde) = (lipschitz.full, lipschitz.hat(), lipschitz.check_min(), lipschitz.tilde());
    let probs = match &s.block_probs {
        Some(p) => p.clone(),
        None => vec![1.0 / b as f64; b],
    };

    // Constants shared by the rules and the bounds.
    let m = s.bounds.m.or(problem.gradient_bound());
    let sigma = s.bounds.sigma.unwrap_or(problem.sigma());
    let (optimal_value, source) = match (problem.optimal_value(), problem.optimal_value_lower()) {
        (Some(v), _) => (Some(v), OptimalValueSource::Exact),
        (None, Some(v)) => (Some(v), OptimalValueSource::LowerBound),
        (None, None) => (None, OptimalValueSource::Unknown),
    };
    let phi_1 = problem.composite_value(&x1).map_err(|e| BenchError::Config(e.to_string()))?;
    let phi_gap = optimal_value.map(|v| (phi_1 - v).max(0.0));
    let f_gap = optimal_value.map(|v| (problem.value(&x1) - v).max(0.0));
    let d_f = f_gap.map(|g| (2.0 * g / l_f).sqrt());
    let d_phi = phi_gap.map(|g| (g / l_hat).sqrt());
    let d_px = match problem.minimizer() {
        Some(xs) if probs.len() == b => Some(
            zsbc::diagnostics::weighted_dist_sq(problem.layout(), &x1, xs, &probs)
                .map_err(|e| cx.err("solver", "block_probs", e))?
                .sqrt(),
        ),
        _ => None,
    };
    let d_tilde_default = match algo {
        Algorithm::ZsBcd if s.bcd_variant == BcdVariant::Convex => d_px,
        Algorithm::ZsBcd => d_f.map(|d| bcd_optimal_d_tilde(l_f, l_hat, d)),
        _ => d_phi,
    };
    let d_tilde = s.bounds.d_tilde.or(d_tilde_default.filter(|d| *d > 0.0));

    let need = |what: Option<f64>, key: &str, why: &str| {
        what.ok_or_else(|| {
            cx.err("solver.bounds", key, format!("{why} needs this constant and the problem does not supply it"))
        })
    };

    // Two-phase parameters come first: the rule may fix the per-run budget.
    let variant = match algo {
        Algorithm::ZsBmd => Some(TwoPhaseVariant::Bmd),
        Algorithm::ZsBccgApprox => Some(TwoPhaseVariant::Bccg),
        _ => None,
    };
    let mut budget = s.budget;
    let two_phase_derived = match &config.two_phase {
        None => None,
        Some(tp) => {
            let Some(variant) = variant else {
                return Err(cx.err("solver", "algo", "the two-phase scheme wraps zs_bmd or zs_bccg_approx"));
            };
            let rule = match (tp.epsilon, tp.confidence) {
                (Some(epsilon), Some(lambda)) => {
                    if !(epsilon > 0.0 && lambda > 0.0 && lambda < 1.0) {
                        return Err(cx.err("two_phase", "Lambda", "need epsilon > 0 and 0 < Lambda < 1"));
                    }
                    let inputs = TwoPhaseInputs {
                        epsilon,
                        lambda,
                        n,
                        b,
                        m: need(m, "M", "the two-phase parameter rule")?,
                        sigma,
                        l_f,
                        l_hat,
                        l_check,
                        d_phi: need(d_phi, "D_Phi", "the two-phase parameter rule")?,
                        d_tilde: need(d_tilde, "D_tilde", "the two-phase parameter rule")?,
                    };
                    Some(two_phase_parameters(variant, &inputs))
                }
                _ => None,
            };
            let runs = match (tp.runs, tp.confidence) {
                (Some(r), _) => r,
                (None, Some(l)) if l > 0.0 && l < 1.0 => runs_for_confidence(l),
                _ => return Err(cx.err("two_phase", "S", "give S or a Lambda in (0, 1)")),
            };
            let post = match (tp.post_samples, rule) {
                (Some(p), _) => p,
                (None, Some(r)) => r.post_samples as usize,
                (None, None) => {
                    return Err(cx.err("two_phase", "post_samples", "give post_samples or both epsilon and Lambda"))
                }
            };
            if runs == 0 || post == 0 {
                return Err(cx.err("two_phase", "S", "S and post_samples must be positive"));
            }
            if budget.is_none() && s.iterations.is_none() {
                budget = rule.map(|r| r.total_calls);
            }
            Some(TwoPhaseDerived {
                runs,
                post_samples: post,
                epsilon: tp.epsilon,
                confidence: tp.confidence,
                rule_budget: rule.map(|r| r.total_calls),
            })
        }
    };

    // Budget rules fix T, T', alpha, the mu cap and delta together.
    let budget_rule = match (budget, algo) {
        (None, _) => None,
        (Some(_), _) if s.iterations.is_some() => {
            return Err(cx.err("solver", "budget", "give either T or a call budget, not both"));
        }
        (Some(tt), Algorithm::ZsBmd) => Some(bmd_budget(
            n,
            tt,
            need(m, "M", "the call-budget rule")?,
            sigma,
            l_hat,
            l_tilde,
            need(d_tilde, "D_tilde", "the call-budget rule")?,
            need(d_phi, "D_Phi", "the call-budget rule")?,
        )),
        (Some(tt), Algorithm::ZsBccgApprox) => Some(bccg_approx_budget(
            n,
            b,
            tt,
            need(m, "M", "the call-budget rule")?,
            sigma,
            l_hat,
            l_check,
            need(d_tilde, "D_tilde", "the call-budget rule")?,
            need(d_phi, "D_Phi", "the call-budget rule")?,
        )),
        (Some(_), _) => return Err(cx.err("solver", "budget", "call budgets apply to zs_bmd and zs_bccg_approx")),
    };

    let t = match (s.iterations, budget_rule) {
        (Some(t), _) => t,
        (None, Some(r)) => r.iterations,
        (None, None) => return Err(cx.err("solver", "T", "missing iteration limit (or a call budget)")),
    };
    if t == 0 {
        return Err(cx.err("solver", "T", "must be at least 1"));
    }

    let composite_rule = || -> Result<_, BenchError> {
        Ok(bccg_composite_corollary(n, t, need(m, "M", "the conditional-gradient corollary")?, sigma, l_f, l_check))
    };

    let (stepsizes, stepsize_source) = match float_list(&s.stepsizes) {
        Some(v) => (v, "given"),
        None => {
            let alpha = match algo {
                Algorithm::ZsBcd => match s.bcd_variant {
                    BcdVariant::Nonconvex => {
                        bcd_corollary(
                            n,
                            t,
                            sigma,
                            l_hat,
                            need(d_tilde, "D_tilde", "the stepsize rule")?,
                            d_f.unwrap_or(0.0),
                        )
                        .alpha
                    }
                    BcdVariant::Convex => {
                        bcd_convex(
                            n,
                            t,
                            sigma,
                            l_f,
                            need(d_tilde, "D_tilde", "the stepsize rule")?,
                            d_px.unwrap_or(0.0),
                        )
                        .alpha
                    }
                },
                Algorithm::ZsBmd => budget_rule.map_or(1.0 / l_hat, |r| r.alpha),
                Algorithm::ZsBccgSmooth | Algorithm::ZsBccgComposite => 1.0 / (t as f64).sqrt(),
                Algorithm::ZsBccgApprox => approx_alpha(l_hat),
            };
            (Schedule::Constant(alpha), "corollary")
        }
    };

    let batch_sizes = match (&s.batch_sizes, budget_rule) {
        (Some(CountParam::Constant(v)), _) => Schedule::Constant(*v),
        (Some(CountParam::List(v)), _) => Schedule::List(v.clone()),
        (Some(CountParam::Rule(_)) | None, Some(r)) => Schedule::Constant(r.batch),
        (Some(CountParam::Rule(_)), None) => match algo {
            Algorithm::ZsBccgSmooth | Algorithm::ZsBccgComposite => Schedule::Constant(composite_rule()?.batch),
            _ => {
                return Err(cx.err(
                    "solver",
                    "batch_sizes",
                    "the batch-size rule needs a call budget for this algorithm",
                ))
            }
        },
        (None, None) => Schedule::Constant(1),
    };
    let batches = batch_sizes.values(t, "batch size").map_err(|e| cx.err("solver", "batch_sizes", e))?;
    let total: u64 = batches.iter().map(|&v| v as u64).sum();
    let t_tilde = budget.unwrap_or(total);

    let mu_cap = match algo {
        Algorithm::ZsBcd => match s.bcd_variant {
            BcdVariant::Nonconvex => d_f.map(|d| d / (n as f64 + 4.0) * (1.0 / t as f64).sqrt()),
            BcdVariant::Convex => d_px.map(|d| d / (n as f64 + 5.0).sqrt()),
        },
        Algorithm::ZsBmd => d_phi.map(|d| d / (n as f64 + 4.0) * (1.0 / t_tilde as f64).sqrt()),
        Algorithm::ZsBccgApprox => d_phi.map(|d| d / (n as f64 + 4.0) * (b as f64 / t_tilde as f64).sqrt()),
        Algorithm::ZsBccgSmooth | Algorithm::ZsBccgComposite => {
            m.map(|m| bccg_composite_corollary(n, t, m, sigma, l_f, l_check).mu)
        }
    };
    let (mu, mu_source) = match s.mu {
        ScalarParam::Value(v) => (v, "given"),
        ScalarParam::Rule(_) => match mu_cap {
            Some(c) => (c.max(MU_FLOOR), "corollary"),
            None => {
                return Err(cx.err(
                    "solver",
                    "mu",
                    "the smoothing rule needs a known optimal value or M; give mu explicitly",
                ))
            }
        },
    };
    if !(mu.is_finite() && mu >= MU_FLOOR) {
        return Err(cx.err("solver", "mu", format!("must be at least {MU_FLOOR:e}, got {mu}")));
    }

    let deltas = match (algo, &s.delta_k) {
        (Algorithm::ZsBccgApprox, Some(p)) => Some(match float_list(p) {
            Some(v) => v,
            None => Schedule::Constant(approx_delta(t)),
        }),
        (Algorithm::ZsBccgApprox, None) => {
            Some(Schedule::Constant(budget_rule.and_then(|r| r.delta).unwrap_or(approx_delta(t))))
        }
        (_, Some(_)) => return Err(cx.err("solver", "delta_k", "only zs_bccg_approx takes approximation parameters")),
        (_, None) => None,
    };

    let mut base = SolverConfig::new(algo, t, stepsizes, config.master_seed)
        .with_batch(batch_sizes)
        .with_lipschitz(lipschitz.clone())
        .with_bcd_variant(s.bcd_variant);
    if let Some(p) = &s.block_probs {
        base = base.with_probs(p.clone());
    }
    if let Some(d) = deltas {
        base = base.with_deltas(d);
    }
    if let Some(k) = s.max_inner {
        base.max_inner = k;
    }

    let dist = validate(problem.geometry(), &base, &x1).map_err(|e| {
        let key = match e {
            zsbc::Error::Admissibility { .. } => "stepsizes",
            zsbc::Error::Dimension { .. } => "block_probs",
            _ => "algo",
        };
        cx.err("solver", key, e)
    })?;

    let metrics = resolve_metrics(&cx, &config, &problem, algo)?;
    let mut compare = Vec::new();
    if config.compare.is_empty() {
        if config.two_phase.is_none() {
            compare.push(default_bound(algo, s.bcd_variant));
        }
    } else {
        for name in &config.compare {
            compare.push(BoundId::from_name(name).map_err(|e| cx.err("", "compare", e))?);
        }
    }
    let mut metrics = metrics;
    for id in &compare {
        if let Some(k) = id.metric() {
            if !metrics.contains(&k) {
                check_metric(&cx, &problem, k, "compare")?;
                metrics.push(k);
            }
        }
    }

    let alphas = base.stepsizes.values(t, "stepsize").map_err(|e| cx.err("solver", "stepsizes", e))?;
    let delta_vals = match &base.deltas {
        Some(d) => Some(d.values(t, "delta").map_err(|e| cx.err("solver", "delta_k", e))?),
        None => None,
    };
    let constant_batch = batches.iter().all(|&v| v == batches[0]);
    let bound_inputs = BoundInputs {
        n: Some(n as f64),
        b: Some(b as f64),
        t: Some(t as f64),
        t_batch: constant_batch.then_some(batches[0] as f64),
        t_tilde: Some(t_tilde as f64),
        post_samples: two_phase_derived.as_ref().map(|p| p.post_samples as f64),
        mu: Some(mu),
        sigma: Some(sigma),
        m,
        l_f: Some(l_f),
        l_hat: Some(l_hat),
        l_check: Some(l_check),
        d_f,
        d_phi,
        d_px,
        d_tilde,
        phi_gap,
        phi_mu_gap: None,
        runs: two_phase_derived.as_ref().map(|p| p.runs as f64),
        lambda: config.two_phase.as_ref().and_then(|p| p.lambda),
        alphas: Some(alphas.clone()),
        batches: Some(batches.iter().map(|&v| v as f64).collect()),
        deltas: delta_vals.clone(),
        probs: Some(probs.clone()),
        block_l: Some(lipschitz.blocks.clone()),
        diameters: problem.geometry().diameters(),
    };

    let w = dist.weights();
    let (argmax, max_weight) =
        w.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
    let output_distribution = OutputSummary {
        steps: w.len(),
        support: w.iter().filter(|v| **v > 0.0).count(),
        expected_index: w.iter().enumerate().map(|(k, v)| (k + 1) as f64 * v).sum(),
        max_weight,
        argmax: argmax + 1,
    };

    let two_phase = two_phase_derived.as_ref().map(|p| TwoPhaseConfig {
        runs: p.runs,
        post_samples: p.post_samples,
        epsilon: p.epsilon,
        lambda: p.confidence,
        base: base.clone(),
    });

    let derived = Derived {
        algorithm: algo.name(),
        n,
        blocks: b,
        iterations: t,
        budget,
        stepsize: Range::of(&alphas),
        stepsize_source,
        batch: Range::of(&batches.iter().map(|&v| v as f64).collect::<Vec<_>>()),
        total_samples: total,
        calls_per_run: 2 * total,
        mu,
        mu_cap,
        mu_source,
        delta: delta_vals.as_deref().map(Range::of),
        constants: Constants {
            l_f,
            l_hat,
            l_check,
            l_tilde,
            m,
            sigma,
            optimal_value,
            optimal_value_source: source,
            phi_gap,
            d_f,
            d_phi,
            d_px,
            d_tilde,
        },
        output_distribution,
        two_phase: two_phase_derived,
        metrics: metrics.iter().map(|m| m.name()).collect(),
        compare: compare.iter().map(|c| c.name()).collect(),
    };

    Ok(Resolved { config, problem, base, two_phase, mu, metrics, compare, bound_inputs, derived })
}

fn check_metric(cx: &Ctx, problem: &TestProblem, kind: MetricKind, key: &str) -> Result<(), BenchError> {
    let problem_ok = match kind {
        MetricKind::GradMappingSq => true,
        MetricKind::FwGap | MetricKind::GenFwGap => problem.geometry().is_bounded(),
        MetricKind::Suboptimality => problem.optimal_value().is_some(),
        MetricKind::WeightedDistSq => problem.minimizer().is_some(),
    };
    if problem_ok {
        Ok(())
    } else {
        Err(cx.err("", key, format!("metric {} is not available on problem {}", kind.name(), problem.name())))
    }
}

fn resolve_metrics(
    cx: &Ctx,
    config: &ExperimentConfig,
    problem: &TestProblem,
    algo: Algorithm,
) -> Result<Vec<MetricKind>, BenchError> {
    if config.metrics.is_empty() {
        let k = default_metric(algo, config.solver.bcd_variant);
        check_metric(cx, problem, k, "metrics")?;
        return Ok(vec![k]);
    }
    let mut out = Vec::new();
    for name in &config.metrics {
        let k = MetricKind::from_name(name).map_err(|e| cx.err("", "metrics", e))?;
        check_metric(cx, problem, k, "metrics")?;
        if !out.contains(&k) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Human-readable summary for `--validate-only`.
pub fn describe(r: &Resolved) -> String {
    let d = &r.derived;
    let c = &d.constants;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("problem {} n={} blocks={}", r.problem.name(), d.n, d.blocks));
    line(format!("algorithm {} T={} replications={}", d.algorithm, d.iterations, r.config.replications));
    if let Some(tt) = d.budget {
        line(format!("call budget T~ = {tt}"));
    }
    line(format!(
        "T' (batch size): first {} min {} max {}; {} samples, {} oracle calls per run",
        d.batch.first, d.batch.min, d.batch.max, d.total_samples, d.calls_per_run
    ));
    line(format!(
        "stepsize ({}): first {:e} min {:e} max {:e}",
        d.stepsize_source, d.stepsize.first, d.stepsize.min, d.stepsize.max
    ));
    match d.mu_cap {
        Some(cap) => line(format!("mu = {:e} ({}), mu cap {:e}", d.mu, d.mu_source, cap)),
        None => line(format!("mu = {:e} ({}), mu cap unavailable", d.mu, d.mu_source)),
    }
    if let Some(delta) = d.delta {
        line(format!("delta: first {:e} min {:e} max {:e}", delta.first, delta.min, delta.max));
    }
    let o = &d.output_distribution;
    line(format!(
        "P_R over {} steps: support {}, E[R] = {:.3}, max weight {:e} at k = {}",
        o.steps, o.support, o.expected_index, o.max_weight, o.argmax
    ));
    line(format!("L_f = {:e}, L^ = {:e}, L-check = {:e}, sigma = {}", c.l_f, c.l_hat, c.l_check, c.sigma));
    if let Some(tp) = &d.two_phase {
        line(format!("two-phase: S = {}, post-optimization samples = {}", tp.runs, tp.post_samples));
        if let Some(tt) = tp.rule_budget {
            line(format!("two-phase rule budget T~ = {tt}"));
        }
    }
    line(format!("metrics: {}", d.metrics.join(", ")));
    if !d.compare.is_empty() {
        line(format!("bounds: {}", d.compare.join(", ")));
    }
    out
}
