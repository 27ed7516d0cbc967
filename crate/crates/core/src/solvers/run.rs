use std::time::Duration;

use super::{
    max_pl, output_weights_zs_bccg, output_weights_zs_bccg_approx, output_weights_zs_bcd, output_weights_zs_bmd,
    sample_block, Algorithm, BcdVariant, Lipschitz, OutputDistribution, RunReport, SolverConfig, StepRecord,
    DIVERGENCE_NORM, FULL_TRAJECTORY_LIMIT,
};
use crate::block::{dot, norm};
use crate::error::{Error, Result};
use crate::geometry::{cndg, DistanceGenerator, FeasibleBlock, Geometry, Regularizer};
use crate::oracle::SmoothedOracle;
use crate::rng::tag;

/// Wall clock for run reports. `wasm32-unknown-unknown` has no clock, so it reads zero there.
struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    started: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            started: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.started.elapsed();
        #[cfg(target_arch = "wasm32")]
        Duration::ZERO
    }
}

const FEASIBILITY_TOL: f64 = 1e-10;

/// Runs `config.algorithm`.
pub fn solve(oracle: &SmoothedOracle, geometry: &Geometry, config: &SolverConfig, x1: &[f64]) -> Result<RunReport> {
    run(oracle, geometry, config, x1, config.algorithm)
}

/// ZS-BCD on `R^n`; `config.algorithm` is ignored.
pub fn zs_bcd(oracle: &SmoothedOracle, config: &SolverConfig, x1: &[f64]) -> Result<RunReport> {
    run(oracle, &Geometry::unconstrained(oracle.layout_arc()), config, x1, Algorithm::ZsBcd)
}

pub fn zs_bmd(oracle: &SmoothedOracle, geometry: &Geometry, config: &SolverConfig, x1: &[f64]) -> Result<RunReport> {
    run(oracle, geometry, config, x1, Algorithm::ZsBmd)
}

pub fn zs_bccg_smooth(
    oracle: &SmoothedOracle,
    geometry: &Geometry,
    config: &SolverConfig,
    z1: &[f64],
) -> Result<RunReport> {
    run(oracle, geometry, config, z1, Algorithm::ZsBccgSmooth)
}

pub fn zs_bccg_composite(
    oracle: &SmoothedOracle,
    geometry: &Geometry,
    config: &SolverConfig,
    z1: &[f64],
) -> Result<RunReport> {
    run(oracle, geometry, config, z1, Algorithm::ZsBccgComposite)
}

pub fn zs_bccg_approx(
    oracle: &SmoothedOracle,
    geometry: &Geometry,
    config: &SolverConfig,
    x1: &[f64],
) -> Result<RunReport> {
    run(oracle, geometry, config, x1, Algorithm::ZsBccgApprox)
}

struct Plan {
    probs: Vec<f64>,
    alphas: Vec<f64>,
    batches: Vec<usize>,
    deltas: Vec<f64>,
    dist: OutputDistribution,
}

fn require_lipschitz(config: &SolverConfig, blocks: usize, algo: Algorithm) -> Result<&Lipschitz> {
    let l = config.lipschitz.as_ref().ok_or_else(|| {
        Error::Config(format!("{} needs block Lipschitz constants for its stepsize rule", algo.name()))
    })?;
    l.check(Some(blocks))?;
    Ok(l)
}

fn admissible(alphas: &[f64], bound: f64, condition: impl Fn(f64) -> String) -> Result<()> {
    match alphas.iter().position(|a| *a > bound) {
        Some(k) => Err(Error::Admissibility { step: k + 1, condition: condition(alphas[k]) }),
        None => Ok(()),
    }
}

/// Checks `config` against the geometry and the stepsize conditions of its
/// algorithm without touching an oracle, and returns `P_R`.
pub fn validate(geometry: &Geometry, config: &SolverConfig, x1: &[f64]) -> Result<OutputDistribution> {
    Ok(checked_plan(geometry, config, x1, config.algorithm)?.dist)
}

fn plan(
    oracle: &SmoothedOracle,
    geometry: &Geometry,
    config: &SolverConfig,
    x1: &[f64],
    algo: Algorithm,
) -> Result<Plan> {
    if geometry.layout() != oracle.layout() {
        return Err(Error::Config("oracle and geometry use different block layouts".into()));
    }
    checked_plan(geometry, config, x1, algo)
}

fn checked_plan(geometry: &Geometry, config: &SolverConfig, x1: &[f64], algo: Algorithm) -> Result<Plan> {
    let layout = geometry.layout();
    layout.check_len(x1)?;
    if x1.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("initial point has non-finite coordinates".into()));
    }
    let t = config.iterations;
    if t == 0 {
        return Err(Error::Config("iteration limit T must be at least 1".into()));
    }
    let b = layout.num_blocks();
    let n = layout.dim() as f64;
    let probs = config.probabilities(b)?;
    let alphas = config.stepsizes.values(t, "stepsize")?;
    if let Some(k) = alphas.iter().position(|a| !(a.is_finite() && *a >= 0.0)) {
        return Err(Error::Config(format!("stepsize at step {} is {}", k + 1, alphas[k])));
    }
    let batches = config.batch_sizes.values(t, "batch size")?;
    if let Some(k) = batches.iter().position(|&v| v == 0) {
        return Err(Error::Config(format!("batch size at step {} is zero", k + 1)));
    }

    let needs_positive = !matches!(algo, Algorithm::ZsBccgSmooth | Algorithm::ZsBccgComposite);
    if needs_positive {
        if let Some(k) = alphas.iter().position(|a| *a <= 0.0) {
            return Err(Error::Config(format!("{} needs positive stepsizes, step {} has 0", algo.name(), k + 1)));
        }
    }
    if algo != Algorithm::ZsBcd && !geometry.is_feasible(x1, FEASIBILITY_TOL) {
        return Err(Error::Config("initial point is not feasible".into()));
    }

    let mut deltas = Vec::new();
    let dist = match algo {
        Algorithm::ZsBcd => {
            let plain = geometry
                .blocks()
                .iter()
                .all(|g| matches!(g.feasible(), FeasibleBlock::Unconstrained) && g.chi() == Regularizer::Zero);
            if !plain {
                return Err(Error::Config("zs_bcd solves unconstrained problems without a regularizer".into()));
            }
            if batches.iter().any(|&v| v != 1) {
                return Err(Error::Config("zs_bcd uses a single estimator sample per step (batch size 1)".into()));
            }
            let l = require_lipschitz(config, b, algo)?;
            match config.bcd_variant {
                BcdVariant::Nonconvex => {
                    let pmin = probs.iter().cloned().fold(f64::INFINITY, f64::min);
                    let bound = pmin / (2.0 * max_pl(&probs, l) * (n + 4.0));
                    admissible(&alphas, bound, |a| {
                        format!("ZS-BCD requires alpha_k <= min p_s / (2 (n+4) max p_s L_s) = {bound:e}, got {a:e}")
                    })?;
                }
                BcdVariant::Convex => {
                    let bound = 1.0 / (4.0 * (n + 5.0) * l.full);
                    admissible(&alphas, bound, |a| {
                        format!("convex ZS-BCD requires alpha_k <= 1 / (4 (n+5) L_f) = {bound:e}, got {a:e}")
                    })?;
                }
            }
            output_weights_zs_bcd(&alphas, &probs, l, layout.dim(), config.bcd_variant)?
        }
        Algorithm::ZsBmd => {
            let l = require_lipschitz(config, b, algo)?;
            let bound = 2.0 / l.hat();
            admissible(&alphas, bound, |a| {
                format!("ZS-BMD requires alpha_k <= 2 / L_s for every block = {bound:e}, got {a:e}")
            })?;
            output_weights_zs_bmd(&alphas, &probs, l)?
        }
        Algorithm::ZsBccgSmooth | Algorithm::ZsBccgComposite => {
            if !geometry.is_bounded() {
                return Err(Error::Config(format!("{} needs every block to be bounded", algo.name())));
            }
            admissible(&alphas, 1.0, |a| format!("conditional gradient steps need alpha_k in [0, 1], got {a}"))?;
            output_weights_zs_bccg(&alphas)?
        }
        Algorithm::ZsBccgApprox => {
            if !geometry.is_bounded() {
                return Err(Error::Config("zs_bccg_approx needs every block to be bounded".into()));
            }
            if geometry.blocks().iter().any(|g| g.phi() != DistanceGenerator::Euclidean) {
                return Err(Error::UnsupportedGeometry(
                    "zs_bccg_approx runs the conditional-gradient prox with the euclidean distance generator only"
                        .into(),
                ));
            }
            deltas = config
                .deltas
                .as_ref()
                .ok_or_else(|| Error::Config("zs_bccg_approx needs approximation parameters delta_k".into()))?
                .values(t, "delta")?;
            if let Some(k) = deltas.iter().position(|d| !(d.is_finite() && *d > 0.0)) {
                return Err(Error::Config(format!("delta at step {} must be positive, got {}", k + 1, deltas[k])));
            }
            let l = require_lipschitz(config, b, algo)?;
            let bound = 1.0 / l.hat();
            admissible(&alphas, bound, |a| {
                format!("approximate ZS-BCCG requires alpha_k <= 1 / L_s for every block = {bound:e}, got {a:e}")
            })?;
            output_weights_zs_bccg_approx(&alphas, &probs, l)?
        }
    };
    Ok(Plan { probs, alphas, batches, deltas, dist })
}

fn run(
    oracle: &SmoothedOracle,
    geometry: &Geometry,
    config: &SolverConfig,
    x1: &[f64],
    algo: Algorithm,
) -> Result<RunReport> {
    let started = Stopwatch::start();
    let plan = plan(oracle, geometry, config, x1, algo)?;
    let layout = geometry.layout();
    let t = config.iterations;
    let root = config.stream();
    let r = plan.dist.sample(&root.derive(tag::OUTPUT));
    let guard = geometry.blocks().iter().any(|g| !g.is_bounded());
    let thin = if t > FULL_TRAJECTORY_LIMIT { t.div_ceil(10_000) } else { 1 };

    let mut x = x1.to_vec();
    let mut x_r = Vec::new();
    let mut trajectory = Vec::new();
    let mut steps = Vec::with_capacity(t);
    let mut calls = 0u64;

    for k in 1..=t {
        if k == r {
            x_r = x.clone();
        }
        if config.store_trajectory && (k == 1 || k % thin == 0 || k == r) {
            trajectory.push((k, x.clone()));
        }
        let alpha = plan.alphas[k - 1];
        let batch = plan.batches[k - 1];
        let s = sample_block(&plan.probs, &root.path(&[tag::BLOCK, k as u64]));
        let g = oracle
            .batch_block_estimate(&x, s, batch, &root.path(&[tag::ESTIMATOR, k as u64]))
            .map_err(|e| e.at_step(k))?;
        calls += 2 * batch as u64;

        let range = layout.range(s)?;
        let geom = geometry.block(s)?;
        let xs = &x[range.clone()];
        let mut surrogate_gap = None;
        let mut inner_iterations = None;
        let next: Vec<f64> = match algo {
            Algorithm::ZsBcd => xs.iter().zip(&g).map(|(a, gi)| a - alpha * gi).collect(),
            Algorithm::ZsBmd => geom.prox(xs, &g, alpha).map_err(|e| e.at_step(k))?,
            Algorithm::ZsBccgSmooth | Algorithm::ZsBccgComposite => {
                let v = if algo == Algorithm::ZsBccgSmooth { geom.linear_lmo(&g) } else { geom.lmo(&g) }
                    .map_err(|e| e.at_step(k))?;
                let diff: Vec<f64> = xs.iter().zip(&v).map(|(a, b)| a - b).collect();
                let mut gap = dot(&g, &diff);
                if algo == Algorithm::ZsBccgComposite {
                    gap += geom.chi_value(xs) - geom.chi_value(&v);
                }
                surrogate_gap = Some(gap);
                xs.iter().zip(&v).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect()
            }
            Algorithm::ZsBccgApprox => {
                let out = cndg(geom, xs, &g, alpha, plan.deltas[k - 1], config.max_inner).map_err(|e| e.at_step(k))?;
                inner_iterations = Some(out.inner_iterations);
                out.point
            }
        };
        x[range].copy_from_slice(&next);

        if guard {
            let nx = norm(&x);
            if !(nx <= DIVERGENCE_NORM) {
                return Err(Error::Divergence { step: k, norm: nx });
            }
        }
        steps.push(StepRecord {
            k,
            block: s,
            alpha,
            batch,
            oracle_calls: calls,
            estimate_norm: norm(&g),
            surrogate_gap,
            inner_iterations,
        });
    }
    if config.store_trajectory {
        trajectory.push((t + 1, x.clone()));
    }

    Ok(RunReport {
        algorithm: algo,
        iterations: t,
        r,
        x_r,
        alpha_r: plan.alphas[r - 1],
        final_point: x,
        trajectory,
        steps,
        oracle_calls: calls,
        output_weights: plan.dist.weights().to_vec(),
        wall_time: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::Schedule;
    use super::*;
    use crate::block::BlockLayout;
    use crate::geometry::BlockGeometry;
    use crate::oracle::{FnObjective, NoiseModel, Objective};
    use crate::rng::RngStream;

    fn half_sq(n: usize) -> Arc<dyn Objective> {
        Arc::new(FnObjective::new(n, |x: &[f64]| 0.5 * x.iter().map(|v| v * v).sum::<f64>()))
    }

    fn oracle(f: Arc<dyn Objective>, sizes: Vec<usize>, noise: NoiseModel) -> SmoothedOracle {
        SmoothedOracle::new(f, noise, 1e-3, Arc::new(BlockLayout::new(sizes).unwrap())).unwrap()
    }

    fn unit_l(b: usize) -> Lipschitz {
        Lipschitz::new(vec![1.0; b], 1.0).unwrap()
    }

    #[test]
    fn zero_linear_objective_keeps_x1() {
        let f: Arc<dyn Objective> = Arc::new(FnObjective::new(4, |_: &[f64]| 0.0));
        let o = oracle(f, vec![2, 2], NoiseModel::Noiseless);
        let cfg = SolverConfig::new(Algorithm::ZsBcd, 20, Schedule::Constant(1e-3), 1).with_lipschitz(unit_l(2));
        let rep = zs_bcd(&o, &cfg, &[1.0, -2.0, 3.0, 0.5]).unwrap();
        assert!(rep.trajectory.iter().all(|(_, x)| x == &vec![1.0, -2.0, 3.0, 0.5]));
        assert_eq!(rep.oracle_calls, 40);
        assert_eq!(o.calls(), 40);
        assert_eq!(rep.trajectory.len(), 21);
    }

    #[test]
    fn only_the_drawn_block_moves() {
        let o = oracle(half_sq(6), vec![1, 2, 3], NoiseModel::GradientConsistent { sigma: 0.5 });
        let geo = Geometry::uniform_box(o.layout_arc(), -2.0, 2.0, Regularizer::L1 { weight: 0.1 }).unwrap();
        let x1 = vec![1.0, -1.0, 0.5, 1.5, -0.5, 0.2];
        let l = unit_l(3);
        let configs = [
            SolverConfig::new(Algorithm::ZsBmd, 30, Schedule::Constant(0.5), 2).with_batch(Schedule::Constant(3)),
            SolverConfig::new(Algorithm::ZsBccgComposite, 30, Schedule::Constant(0.2), 2),
            SolverConfig::new(Algorithm::ZsBccgSmooth, 30, Schedule::Constant(0.2), 2),
            SolverConfig::new(Algorithm::ZsBccgApprox, 30, Schedule::Constant(0.5), 2)
                .with_deltas(Schedule::Constant(1e-3)),
        ];
        for cfg in configs {
            let cfg = cfg.with_lipschitz(l.clone());
            let rep = solve(&o, &geo, &cfg, &x1).unwrap();
            for (w, step) in rep.trajectory.windows(2).zip(&rep.steps) {
                let (a, b) = (&w[0].1, &w[1].1);
                for s in (0..3).filter(|&s| s != step.block) {
                    let r = o.layout().range(s).unwrap();
                    assert_eq!(a[r.clone()], b[r], "{:?}", cfg.algorithm);
                }
                assert!(geo.is_feasible(b, 1e-10));
            }
            assert_eq!(rep.point(rep.r).unwrap(), rep.x_r.as_slice());
        }
    }

    #[test]
    fn rejects_inadmissible_steps_before_any_call() {
        let o = oracle(half_sq(4), vec![2, 2], NoiseModel::Noiseless);
        let geo = Geometry::uniform_box(o.layout_arc(), -1.0, 1.0, Regularizer::Zero).unwrap();
        let l = Lipschitz::new(vec![1.0, 4.0], 4.0).unwrap();
        let bmd = SolverConfig::new(Algorithm::ZsBmd, 5, Schedule::List(vec![0.1, 0.1, 0.6, 0.1, 0.1]), 0)
            .with_lipschitz(l.clone());
        let err = solve(&o, &geo, &bmd, &[0.0; 4]).unwrap_err();
        assert!(matches!(err, Error::Admissibility { step: 3, ref condition } if condition.contains("2 / L_s")));
        let approx = SolverConfig::new(Algorithm::ZsBccgApprox, 5, Schedule::Constant(0.3), 0)
            .with_lipschitz(l.clone())
            .with_deltas(Schedule::Constant(0.1));
        assert!(matches!(solve(&o, &geo, &approx, &[0.0; 4]), Err(Error::Admissibility { step: 1, .. })));
        let bcd = SolverConfig::new(Algorithm::ZsBcd, 5, Schedule::Constant(0.1), 0).with_lipschitz(l);
        assert!(matches!(zs_bcd(&o, &bcd, &[0.0; 4]), Err(Error::Admissibility { .. })));
        assert_eq!(o.calls(), 0);
    }

    #[test]
    fn infeasible_start_and_missing_inputs() {
        let o = oracle(half_sq(2), vec![1, 1], NoiseModel::Noiseless);
        let geo = Geometry::uniform_box(o.layout_arc(), -1.0, 1.0, Regularizer::Zero).unwrap();
        let cfg = SolverConfig::new(Algorithm::ZsBmd, 5, Schedule::Constant(0.1), 0).with_lipschitz(unit_l(2));
        assert!(matches!(solve(&o, &geo, &cfg, &[2.0, 0.0]), Err(Error::Config(_))));
        let no_l = SolverConfig::new(Algorithm::ZsBmd, 5, Schedule::Constant(0.1), 0);
        assert!(solve(&o, &geo, &no_l, &[0.0, 0.0]).is_err());
        let free = Geometry::unconstrained(o.layout_arc());
        let cg = SolverConfig::new(Algorithm::ZsBccgSmooth, 5, Schedule::Constant(0.1), 0);
        assert!(solve(&o, &free, &cg, &[0.0, 0.0]).is_err());
        let approx =
            SolverConfig::new(Algorithm::ZsBccgApprox, 5, Schedule::Constant(0.1), 0).with_lipschitz(unit_l(2));
        assert!(solve(&o, &geo, &approx, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn divergence_is_reported_with_step() {
        let f: Arc<dyn Objective> = Arc::new(FnObjective::new(1, |x: &[f64]| -(x[0] * x[0]).exp()));
        let o =
            SmoothedOracle::new(f, NoiseModel::Noiseless, 1e-3, Arc::new(BlockLayout::new(vec![1]).unwrap())).unwrap();
        let cfg = SolverConfig::new(Algorithm::ZsBcd, 10_000, Schedule::Constant(0.01), 3).with_lipschitz(unit_l(1));
        match zs_bcd(&o, &cfg, &[2.0]) {
            Err(Error::Divergence { step, norm }) => assert!(step >= 1 && norm > 1e12),
            Err(Error::AtStep { source, .. }) => assert!(matches!(*source, Error::Numerical { .. })),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_block_bcd_is_zeroth_order_sgd() {
        let n = 5;
        let o = oracle(half_sq(n), vec![n], NoiseModel::GradientConsistent { sigma: 0.3 });
        let alpha = 0.01;
        let cfg = SolverConfig::new(Algorithm::ZsBcd, 50, Schedule::Constant(alpha), 9).with_lipschitz(unit_l(1));
        let x1 = vec![1.0, -1.0, 0.5, 0.0, 2.0];
        let rep = zs_bcd(&o, &cfg, &x1).unwrap();
        let direct = oracle(half_sq(n), vec![n], NoiseModel::GradientConsistent { sigma: 0.3 });
        let root = RngStream::new(9).derive(0);
        let mut x = x1.clone();
        for (k, (_, point)) in (1..=50).zip(rep.trajectory.iter()) {
            assert_eq!(point, &x);
            let g = direct.gsmooth_estimate(&x, &root.path(&[tag::ESTIMATOR, k as u64]).derive(0)).unwrap();
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi -= alpha * gi;
            }
        }
        assert_eq!(rep.final_point, x);
    }

    #[test]
    fn zero_regularizer_composite_matches_smooth() {
        let o = oracle(half_sq(4), vec![2, 2], NoiseModel::GradientConsistent { sigma: 0.2 });
        let geo = Geometry::uniform_box(o.layout_arc(), -1.0, 1.0, Regularizer::Zero).unwrap();
        let base = SolverConfig::new(Algorithm::ZsBccgSmooth, 40, Schedule::Constant(0.1), 4)
            .with_batch(Schedule::Constant(2));
        let a = zs_bccg_smooth(&o, &geo, &base, &[0.5; 4]).unwrap();
        let b = zs_bccg_composite(&o, &geo, &base, &[0.5; 4]).unwrap();
        assert_eq!(a.trajectory, b.trajectory);
        assert_eq!(a.r, b.r);
    }

    #[test]
    fn conditional_gradient_step_extremes() {
        let o = oracle(half_sq(2), vec![2], NoiseModel::Noiseless);
        let geo = Geometry::uniform_box(o.layout_arc(), -1.0, 1.0, Regularizer::Zero).unwrap();
        let cfg = SolverConfig::new(Algorithm::ZsBccgSmooth, 4, Schedule::List(vec![0.0, 0.0, 0.0, 1.0]), 1);
        let rep = zs_bccg_smooth(&o, &geo, &cfg, &[0.3, -0.2]).unwrap();
        for (_, z) in &rep.trajectory[..4] {
            assert_eq!(z, &vec![0.3, -0.2]);
        }
        let last = &rep.trajectory[4].1;
        assert!(last.iter().all(|v| v.abs() == 1.0));
        assert_eq!(rep.r, 4);
    }

    #[test]
    fn huge_l1_weight_contracts_to_zero() {
        let o = oracle(half_sq(3), vec![3], NoiseModel::Noiseless);
        let geo = Geometry::uniform_box(o.layout_arc(), -1.0, 1.0, Regularizer::L1 { weight: 1e6 }).unwrap();
        let alphas: Vec<f64> = (1..=10).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let cfg = SolverConfig::new(Algorithm::ZsBccgComposite, 10, Schedule::List(alphas.clone()), 5);
        let z1 = [0.8, -0.4, 0.2];
        let rep = zs_bccg_composite(&o, &geo, &cfg, &z1).unwrap();
        let mut factor = 1.0;
        for (k, (_, z)) in rep.trajectory.iter().enumerate() {
            for (a, b) in z.iter().zip(&z1) {
                assert!((a - factor * b).abs() < 1e-15);
            }
            if k < 10 {
                factor *= 1.0 - alphas[k];
            }
        }
    }

    #[test]
    fn huge_delta_freezes_approx_run() {
        let o = oracle(half_sq(4), vec![2, 2], NoiseModel::GradientConsistent { sigma: 1.0 });
        let geo = Geometry::uniform_box(o.layout_arc(), -1.0, 1.0, Regularizer::Zero).unwrap();
        let cfg = SolverConfig::new(Algorithm::ZsBccgApprox, 25, Schedule::Constant(0.5), 6)
            .with_lipschitz(unit_l(2))
            .with_deltas(Schedule::Constant(1e9));
        let rep = zs_bccg_approx(&o, &geo, &cfg, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(rep.trajectory.iter().all(|(_, x)| x == &vec![0.1, 0.2, 0.3, 0.4]));
        assert!(rep.steps.iter().all(|s| s.inner_iterations == Some(1)));
    }

    #[test]
    fn approx_tracks_prox_run_stepwise() {
        let o = oracle(half_sq(4), vec![2, 2], NoiseModel::GradientConsistent { sigma: 0.5 });
        let geo = Geometry::uniform_box(o.layout_arc(), -1.0, 1.0, Regularizer::Zero).unwrap();
        let l = unit_l(2);
        let delta = 1e-4;
        let approx = SolverConfig::new(Algorithm::ZsBccgApprox, 30, Schedule::Constant(0.5), 8)
            .with_lipschitz(l.clone())
            .with_deltas(Schedule::Constant(delta));
        let rep = zs_bccg_approx(&o, &geo, &approx, &[0.5, -0.5, 0.2, 0.9]).unwrap();
        // replay each step from the approximate iterate with the closed-form prox
        let root = approx.stream();
        for (w, st) in rep.trajectory.windows(2).zip(&rep.steps) {
            let g = o.batch_block_estimate(&w[0].1, st.block, 1, &root.path(&[tag::ESTIMATOR, st.k as u64])).unwrap();
            let p = geo.block(st.block).unwrap().prox(o.layout().view(&w[0].1, st.block).unwrap(), &g, 0.5).unwrap();
            let got = o.layout().view(&w[1].1, st.block).unwrap();
            let d: f64 = got.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
            assert!(d <= 0.5 * delta, "step {}: {d:e}", st.k);
        }
    }

    #[test]
    fn entropy_geometry_runs_stay_on_simplex() {
        let layout = Arc::new(BlockLayout::new(vec![3, 3]).unwrap());
        let f: Arc<dyn Objective> = Arc::new(FnObjective::new(6, |x: &[f64]| {
            x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * v * v).sum::<f64>()
        }));
        let o = SmoothedOracle::new(f, NoiseModel::Noiseless, 1e-3, layout.clone()).unwrap();
        let block = BlockGeometry::new(
            3,
            FeasibleBlock::Simplex { scale: 1.0 },
            DistanceGenerator::Entropy,
            Regularizer::Entropy { weight: 0.05 },
        )
        .unwrap();
        let geo = Geometry::new(layout, vec![block.clone(), block]).unwrap();
        let cfg = SolverConfig::new(Algorithm::ZsBmd, 50, Schedule::Constant(0.05), 1)
            .with_batch(Schedule::Constant(4))
            .with_lipschitz(Lipschitz::new(vec![6.0, 12.0], 12.0).unwrap());
        let rep = zs_bmd(&o, &geo, &cfg, &[1.0 / 3.0; 6]).unwrap();
        assert!(rep.trajectory.iter().all(|(_, x)| geo.is_feasible(x, 1e-10)));
        assert_eq!(rep.oracle_calls, 400);
    }

    #[test]
    fn thinning_keeps_output_iterate() {
        let f: Arc<dyn Objective> = Arc::new(FnObjective::new(1, |x: &[f64]| x[0] * x[0]));
        let o =
            SmoothedOracle::new(f, NoiseModel::Noiseless, 1e-3, Arc::new(BlockLayout::new(vec![1]).unwrap())).unwrap();
        let t = FULL_TRAJECTORY_LIMIT + 1;
        let cfg = SolverConfig::new(Algorithm::ZsBcd, t, Schedule::Constant(1e-3), 2).with_lipschitz(unit_l(1));
        let rep = zs_bcd(&o, &cfg, &[1.0]).unwrap();
        assert!(rep.trajectory.len() < 10_100);
        assert_eq!(rep.point(rep.r).unwrap(), rep.x_r.as_slice());
        assert_eq!(rep.trajectory.last().unwrap().0, t + 1);
    }
}
