//! Browser bindings for a few solver building blocks. The plain functions do
//! the work and are tested natively; the `#[wasm_bindgen]` wrappers only
//! convert errors.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use zsbc::diagnostics::grad_mapping_sq;
use zsbc::geometry::{project_simplex, BlockGeometry, DistanceGenerator, FeasibleBlock, Regularizer};
use zsbc::problems::{make_problem, ProblemSpec};
use zsbc::solvers::{solve, Algorithm, Schedule, SolverConfig};

/// Euclidean projection onto `{y >= 0, sum y = scale}`.
pub fn simplex_projection(y: &[f64], scale: f64) -> Result<Vec<f64>, String> {
    if y.is_empty() {
        return Err("need at least one coordinate".into());
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(format!("scale must be positive, got {scale}"));
    }
    Ok(project_simplex(y, scale))
}

/// `(x - P(x, g, alpha)) / alpha` on the box `[-radius, radius]^d` with an l1 term of the given weight.
pub fn box_l1_mapping(x: &[f64], g: &[f64], alpha: f64, radius: f64, weight: f64) -> Result<Vec<f64>, String> {
    let d = x.len();
    let chi = if weight > 0.0 { Regularizer::L1 { weight } } else { Regularizer::Zero };
    let geom = BlockGeometry::new(
        d,
        FeasibleBlock::Box { lower: vec![-radius; d], upper: vec![radius; d] },
        DistanceGenerator::Euclidean,
        chi,
    )
    .map_err(|e| e.to_string())?;
    if !geom.is_feasible(x, 1e-12) {
        return Err("x lies outside the box".into());
    }
    geom.mapping(x, g, alpha).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct DemoRun {
    pub n: usize,
    pub blocks: usize,
    pub alpha: f64,
    pub mu: f64,
    pub oracle_calls: u64,
    /// 1-based index of the returned iterate.
    pub r: usize,
    /// `||P(x_k, grad f(x_k), alpha)||^2` for `k = 1..=T+1`.
    pub mapping_sq: Vec<f64>,
    pub output_mapping_sq: f64,
}

/// ZS-BMD with `alpha = 1/L^` and a constant batch on the l1-regularized box least-squares problem.
pub fn bmd_demo(
    n: usize,
    blocks: usize,
    iterations: usize,
    batch: usize,
    sigma: f64,
    seed: u64,
) -> Result<DemoRun, String> {
    if iterations == 0 || batch == 0 || iterations > 5_000 || batch > 5_000 {
        return Err("iterations and batch size must lie in 1..=5000".into());
    }
    let err = |e: zsbc::Error| e.to_string();
    let spec = ProblemSpec::new("composite_lasso_box", n, blocks).with_seed(seed).with_sigma(sigma);
    let p = make_problem(&spec).map_err(err)?;
    let l = p.lipschitz().clone();
    let alpha = 1.0 / l.hat();
    // smoothing cap D_Phi / (n+4) * sqrt(1/(T T')), with the known lower bound on Phi*
    let gap = p.composite_value(p.x1()).map_err(err)? - p.optimal_value_lower().unwrap_or(0.0);
    let d_phi = (gap.max(0.0) / l.hat()).sqrt();
    let mu = (d_phi / (n as f64 + 4.0) / ((iterations * batch) as f64).sqrt()).max(1e-6);
    let config = SolverConfig::new(Algorithm::ZsBmd, iterations, Schedule::Constant(alpha), seed)
        .with_batch(Schedule::Constant(batch))
        .with_lipschitz(l);
    let oracle = p.oracle(mu).map_err(err)?;
    let rep = solve(&oracle, p.geometry(), &config, p.x1()).map_err(err)?;
    let mapping_sq = rep
        .trajectory
        .iter()
        .map(|(_, x)| grad_mapping_sq(&p, x, alpha))
        .collect::<zsbc::Result<Vec<_>>>()
        .map_err(err)?;
    Ok(DemoRun {
        n,
        blocks,
        alpha,
        mu,
        oracle_calls: rep.oracle_calls,
        r: rep.r,
        output_mapping_sq: grad_mapping_sq(&p, &rep.x_r, rep.alpha_r).map_err(err)?,
        mapping_sq,
    })
}

#[wasm_bindgen(js_name = projectSimplex)]
pub fn project_simplex_js(y: &[f64], scale: f64) -> Result<Vec<f64>, JsError> {
    simplex_projection(y, scale).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = gradientMapping)]
pub fn gradient_mapping_js(x: &[f64], g: &[f64], alpha: f64, radius: f64, weight: f64) -> Result<Vec<f64>, JsError> {
    box_l1_mapping(x, g, alpha, radius, weight).map_err(|e| JsError::new(&e))
}

/// Returns the run as a JSON string.
#[wasm_bindgen(js_name = runBmd)]
pub fn run_bmd_js(
    n: usize,
    blocks: usize,
    iterations: usize,
    batch: usize,
    sigma: f64,
    seed: u32,
) -> Result<String, JsError> {
    let run = bmd_demo(n, blocks, iterations, batch, sigma, seed as u64).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&run).map_err(|e| JsError::new(&e.to_string()))
}
