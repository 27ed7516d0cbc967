//! Benchmark problems with declared constants.
//!
//! Each problem carries per-block Lipschitz constants `L_s`, the global
//! `L_f`, a gradient bound `M` over bounded feasible sets, and the optimal
//! value when it can be computed exactly. Analytic gradients live here and in
//! `diagnostics` only; solvers see the value oracle.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::block::{dot, norm, BlockLayout};
use crate::error::{Error, Result};
use crate::geometry::{BlockGeometry, DistanceGenerator, FeasibleBlock, Geometry, Regularizer};
use crate::oracle::{NoiseModel, Objective, SmoothedOracle};
use crate::rng::{gaussian_vec, tag, RngStream};
use crate::solvers::Lipschitz;

pub const CATALOG: [&str; 4] = ["quadratic", "nonconvex_sigmoid_ls", "composite_lasso_box", "simplex_entropy"];

/// Relative slack on constants computed by power iteration, which converges from below.
const POWER_SLACK: f64 = 1e-9;
/// `max_t |d/dt t^2/(1+t^2)| = 3 sqrt(3) / 8`.
const SIGMOID_SLOPE: f64 = 0.649_519_052_838_329;

fn default_lambda() -> f64 {
    0.1
}

/// Problem name plus parameters; absent parameters take per-problem defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    pub n: usize,
    pub blocks: usize,
    #[serde(default)]
    pub seed: u64,
    /// Diagonal `a` of the quadratic families; ones by default.
    #[serde(default)]
    pub diag: Option<Vec<f64>>,
    /// Linear term `b` of the quadratic families; seeded uniform on `[-0.5, 0.5]` by default.
    #[serde(default)]
    pub linear: Option<Vec<f64>>,
    /// Rows of `A` in the least-squares families; `n` by default, `0` gives `A = 0`.
    #[serde(default)]
    pub rows: Option<usize>,
    /// Weight of the sigmoid penalty.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Weight of the l1 regularizer of `composite_lasso_box`; 0.1 by default.
    #[serde(default)]
    pub l1: Option<f64>,
    /// Half-width of the box `[-r, r]^n`; `quadratic` is unconstrained without it.
    #[serde(default)]
    pub radius: Option<f64>,
    /// Entropy regularizer weight of `simplex_entropy`.
    #[serde(default)]
    pub entropy_weight: f64,
    /// Default noise level `sigma` for the gradient-consistent oracle.
    #[serde(default)]
    pub sigma: f64,
}

impl ProblemSpec {
    pub fn new(name: &str, n: usize, blocks: usize) -> Self {
        Self {
            name: name.to_string(),
            n,
            blocks,
            seed: 0,
            diag: None,
            linear: None,
            rows: None,
            lambda: default_lambda(),
            l1: None,
            radius: None,
            entropy_weight: 0.0,
            sigma: 0.0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_diag(mut self, a: Vec<f64>) -> Self {
        self.diag = Some(a);
        self
    }

    pub fn with_linear(mut self, b: Vec<f64>) -> Self {
        self.linear = Some(b);
        self
    }

    pub fn with_rows(mut self, m: usize) -> Self {
        self.rows = Some(m);
        self
    }
}

/// Smooth part `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Smooth {
    /// `1/2 x^T diag(a) x - b^T x`
    Quadratic { a: Vec<f64>, b: Vec<f64> },
    /// `1/2 ||A x - y||^2 + lambda sum x_i^2 / (1 + x_i^2)`, `A` row-major `rows x n`.
    SigmoidLs { a: Vec<f64>, rows: usize, y: Vec<f64>, lambda: f64 },
}

impl Smooth {
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Smooth::Quadratic { a, b } => {
                a.iter().zip(b).zip(x).map(|((ai, bi), xi)| 0.5 * ai * xi * xi - bi * xi).sum()
            }
            Smooth::SigmoidLs { a, rows, y, lambda } => {
                let n = x.len();
                let ls: f64 = (0..*rows)
                    .map(|i| {
                        let r = dot(&a[i * n..(i + 1) * n], x) - y[i];
                        0.5 * r * r
                    })
                    .sum();
                ls + lambda * x.iter().map(|t| t * t / (1.0 + t * t)).sum::<f64>()
            }
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Smooth::Quadratic { a, b } => a.iter().zip(b).zip(x).map(|((ai, bi), xi)| ai * xi - bi).collect(),
            Smooth::SigmoidLs { a, rows, y, lambda } => {
                let n = x.len();
                let mut g: Vec<f64> = x.iter().map(|t| lambda * 2.0 * t / (1.0 + t * t).powi(2)).collect();
                for i in 0..*rows {
                    let row = &a[i * n..(i + 1) * n];
                    let r = dot(row, x) - y[i];
                    for (gj, aj) in g.iter_mut().zip(row) {
                        *gj += r * aj;
                    }
                }
                g
            }
        }
    }
}

/// Objective adapter with an explicit dimension, so `A = 0` problems keep `n`.
struct SmoothObjective {
    n: usize,
    f: Arc<Smooth>,
}

impl Objective for SmoothObjective {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.f.value(x)
    }
}

/// Worst observed ratios of the constant audit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// `max ||grad_s f(x + U_s e) - grad_s f(x)|| / (L_s ||e||)`.
    pub block_ratio: f64,
    /// `max ||grad f(x) - grad f(y)|| / (L_f ||x - y||)`.
    pub full_ratio: f64,
    /// `max ||grad f(x)|| / M` over feasible `x`; absent when `M` is not declared.
    pub gradient_ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TestProblem {
    spec: ProblemSpec,
    layout: Arc<BlockLayout>,
    smooth: Arc<Smooth>,
    geometry: Geometry,
    lipschitz: Lipschitz,
    m_bound: Option<f64>,
    phi_star: Option<f64>,
    x_star: Option<Vec<f64>>,
    phi_star_lower: Option<f64>,
    x1: Vec<f64>,
}

/// Builds a catalog problem.
pub fn make_problem(spec: &ProblemSpec) -> Result<TestProblem> {
    let n = spec.n;
    let layout = Arc::new(BlockLayout::uniform(n, spec.blocks)?);
    if !(spec.sigma.is_finite() && spec.sigma >= 0.0) {
        return Err(Error::Config(format!("problem sigma must be nonnegative, got {}", spec.sigma)));
    }
    if let Some(r) = spec.radius {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Config(format!("box radius must be positive, got {r}")));
        }
    }
    match spec.name.as_str() {
        "quadratic" => quadratic(spec, layout),
        "simplex_entropy" => simplex_entropy(spec, layout),
        "nonconvex_sigmoid_ls" => sigmoid(spec, layout, false),
        "composite_lasso_box" => sigmoid(spec, layout, true),
        other => Err(Error::Unknown { kind: "problem", name: other.to_string() }),
    }
}

fn quadratic_terms(spec: &ProblemSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = spec.n;
    let a = spec.diag.clone().unwrap_or_else(|| vec![1.0; n]);
    if a.len() != n {
        return Err(Error::Dimension { expected: n, got: a.len() });
    }
    if a.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Config("quadratic diagonal entries must be positive".into()));
    }
    let b = match &spec.linear {
        Some(b) => b.clone(),
        None => {
            let mut rng = RngStream::new(spec.seed).derive(tag::AUDIT).derive(1).rng();
            (0..n).map(|_| rng.random_range(-0.5..0.5)).collect()
        }
    };
    if b.len() != n {
        return Err(Error::Dimension { expected: n, got: b.len() });
    }
    Ok((a, b))
}

fn block_max(layout: &BlockLayout, v: &[f64]) -> Vec<f64> {
    (0..layout.num_blocks())
        .map(|s| layout.view(v, s).unwrap().iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

fn quadratic(spec: &ProblemSpec, layout: Arc<BlockLayout>) -> Result<TestProblem> {
    let (a, b) = quadratic_terms(spec)?;
    let n = spec.n;
    let l_f = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lipschitz = Lipschitz::new(block_max(&layout, &a), l_f)?;
    let (geometry, x_star, m_bound, x1) = match spec.radius {
        None => {
            let x_star: Vec<f64> = b.iter().zip(&a).map(|(bi, ai)| bi / ai).collect();
            (Geometry::unconstrained(layout.clone()), x_star, None, vec![1.0; n])
        }
        Some(r) => {
            // separable, so clipping the unconstrained minimizer is exact
            let x_star: Vec<f64> = b.iter().zip(&a).map(|(bi, ai)| (bi / ai).clamp(-r, r)).collect();
            let m = a.iter().zip(&b).map(|(ai, bi)| (ai * r + bi.abs()).powi(2)).sum::<f64>().sqrt();
            (Geometry::uniform_box(layout.clone(), -r, r, Regularizer::Zero)?, x_star, Some(m), vec![0.5 * r; n])
        }
    };
    let smooth = Smooth::Quadratic { a, b };
    let f_star = smooth.value(&x_star);
    Ok(TestProblem {
        spec: spec.clone(),
        layout,
        smooth: Arc::new(smooth),
        geometry,
        lipschitz,
        m_bound,
        phi_star: Some(f_star),
        phi_star_lower: Some(f_star),
        x_star: Some(x_star),
        x1,
    })
}

fn simplex_entropy(spec: &ProblemSpec, layout: Arc<BlockLayout>) -> Result<TestProblem> {
    let (a, b) = quadratic_terms(spec)?;
    let w = spec.entropy_weight;
    if !(w.is_finite() && w >= 0.0) {
        return Err(Error::Config(format!("entropy weight must be nonnegative, got {w}")));
    }
    let chi = if w > 0.0 { Regularizer::Entropy { weight: w } } else { Regularizer::Zero };
    let blocks = layout
        .sizes()
        .iter()
        .map(|&k| BlockGeometry::new(k, FeasibleBlock::Simplex { scale: 1.0 }, DistanceGenerator::Entropy, chi))
        .collect::<Result<Vec<_>>>()?;
    let geometry = Geometry::new(layout.clone(), blocks)?;
    let l_f = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lipschitz = Lipschitz::new(block_max(&layout, &a), l_f)?;
    // coordinates of a unit simplex lie in [0, 1]
    let m = a.iter().zip(&b).map(|(ai, bi)| (ai + bi.abs()).powi(2)).sum::<f64>().sqrt();
    let mut x_star = Vec::with_capacity(spec.n);
    for s in 0..layout.num_blocks() {
        x_star.extend(simplex_block_minimizer(layout.view(&a, s)?, layout.view(&b, s)?, w));
    }
    let x1: Vec<f64> = (0..layout.num_blocks())
        .flat_map(|s| {
            let k = layout.sizes()[s];
            vec![1.0 / k as f64; k]
        })
        .collect();
    let smooth = Smooth::Quadratic { a, b };
    let phi_star = smooth.value(&x_star) + geometry.chi_value(&x_star)?;
    Ok(TestProblem {
        spec: spec.clone(),
        layout,
        smooth: Arc::new(smooth),
        geometry,
        lipschitz,
        m_bound: Some(m),
        phi_star: Some(phi_star),
        phi_star_lower: Some(phi_star),
        x_star: Some(x_star),
        x1,
    })
}

/// Minimizer of `sum 1/2 a_i x_i^2 - b_i x_i + w x_i ln x_i` over the unit simplex,
/// from the optimality condition `a_i x_i - b_i + w (1 + ln x_i) = nu` solved by bisection on `nu`.
fn simplex_block_minimizer(a: &[f64], b: &[f64], w: f64) -> Vec<f64> {
    let point = |nu: f64| -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(&ai, &bi)| {
                if w == 0.0 {
                    ((bi + nu) / ai).max(0.0)
                } else {
                    // a x + w ln x = c is increasing in x
                    let c = bi + nu - w;
                    let h = |x: f64| ai * x + w * x.ln() - c;
                    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0);
                    while h(hi) < 0.0 {
                        hi *= 2.0;
                    }
                    for _ in 0..200 {
                        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
                        if h(mid) < 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    0.5 * (lo + hi)
                }
            })
            .collect()
    };
    let total = |nu: f64| point(nu).iter().sum::<f64>();
    let (mut lo, mut hi) = (-1.0, 1.0);
    while total(lo) > 1.0 {
        lo *= 2.0;
    }
    while total(hi) < 1.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = point(0.5 * (lo + hi));
    let sum: f64 = x.iter().sum();
    x.iter().map(|v| v / sum).collect()
}

/// Largest eigenvalue of `B^T B` for the column range `cols` of row-major `a`.
fn gram_norm(a: &[f64], rows: usize, n: usize, cols: std::ops::Range<usize>, seed: u64) -> f64 {
    if rows == 0 || cols.is_empty() {
        return 0.0;
    }
    let k = cols.len();
    let mut v = gaussian_vec(&mut RngStream::new(seed).derive(tag::AUDIT).derive(2).rng(), k);
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let nv = norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let av: Vec<f64> = (0..rows).map(|i| dot(&a[i * n + cols.start..i * n + cols.end], &v)).collect();
        let mut w = vec![0.0; k];
        for (i, avi) in av.iter().enumerate() {
            for (wj, aij) in w.iter_mut().zip(&a[i * n + cols.start..i * n + cols.end]) {
                *wj += avi * aij;
            }
        }
        let next = dot(&w, &v);
        v = w;
        if (next - lambda).abs() <= 1e-10 * next.abs().max(1e-300) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda * (1.0 + POWER_SLACK)
}

fn sigmoid(spec: &ProblemSpec, layout: Arc<BlockLayout>, composite: bool) -> Result<TestProblem> {
    let n = spec.n;
    let rows = spec.rows.unwrap_or(n);
    let lambda = spec.lambda;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::Config(format!("lambda must be nonnegative, got {lambda}")));
    }
    let mut rng = RngStream::new(spec.seed).derive(tag::AUDIT).derive(3).rng();
    let mut a = Vec::with_capacity(rows * n);
    for _ in 0..rows {
        let row = gaussian_vec(&mut rng, n);
        let nr = norm(&row);
        a.extend(row.iter().map(|v| v / nr));
    }
    let y = gaussian_vec(&mut rng, rows);

    // second derivative of t^2/(1+t^2) lies in [-1/2, 2]
    let curvature = 2.0 * lambda;
    let full_gram = gram_norm(&a, rows, n, 0..n, spec.seed);
    let blocks: Vec<f64> = (0..layout.num_blocks())
        .map(|s| gram_norm(&a, rows, n, layout.range(s).unwrap(), spec.seed.wrapping_add(s as u64 + 1)) + curvature)
        .collect();
    let lipschitz = Lipschitz::new(blocks, full_gram + curvature)?;

    let radius = match (composite, spec.radius) {
        (true, r) => Some(r.unwrap_or(1.0)),
        (false, r) => r,
    };
    let l1 = spec.l1.unwrap_or(0.1);
    if composite && !(l1.is_finite() && l1 >= 0.0) {
        return Err(Error::Config(format!("l1 weight must be nonnegative, got {l1}")));
    }
    let chi = if composite && l1 > 0.0 { Regularizer::L1 { weight: l1 } } else { Regularizer::Zero };
    let (geometry, m_bound, x1) = match radius {
        None => (Geometry::unconstrained(layout.clone()), None, vec![0.5; n]),
        Some(r) => {
            let aty_norm = {
                let mut v = vec![0.0; n];
                for i in 0..rows {
                    for (vj, aij) in v.iter_mut().zip(&a[i * n..(i + 1) * n]) {
                        *vj += y[i] * aij;
                    }
                }
                norm(&v)
            };
            let m = full_gram * (1.0 + POWER_SLACK) * r * (n as f64).sqrt()
                + aty_norm
                + lambda * SIGMOID_SLOPE * (n as f64).sqrt();
            (Geometry::uniform_box(layout.clone(), -r, r, chi)?, Some(m * (1.0 + POWER_SLACK)), vec![0.5 * r; n])
        }
    };
    // every term is nonnegative; with A = 0 the origin attains 0
    let (phi_star, x_star) = if rows == 0 { (Some(0.0), Some(vec![0.0; n])) } else { (None, None) };
    Ok(TestProblem {
        spec: spec.clone(),
        layout,
        smooth: Arc::new(Smooth::SigmoidLs { a, rows, y, lambda }),
        geometry,
        lipschitz,
        m_bound,
        phi_star,
        phi_star_lower: Some(0.0),
        x_star,
        x1,
    })
}

impl TestProblem {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn layout_arc(&self) -> Arc<BlockLayout> {
        self.layout.clone()
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// Replaces the geometry, keeping the smooth part; declared `M` is dropped
    /// because it was computed for the original feasible set.
    pub fn with_geometry(mut self, geometry: Geometry) -> Result<Self> {
        if geometry.layout() != self.layout.as_ref() {
            return Err(Error::Config("geometry layout does not match the problem".into()));
        }
        self.geometry = geometry;
        self.m_bound = None;
        self.phi_star = None;
        self.x_star = None;
        Ok(self)
    }

    pub fn smooth(&self) -> &Smooth {
        &self.smooth
    }

    pub fn lipschitz(&self) -> &Lipschitz {
        &self.lipschitz
    }

    /// `M` with `||grad f(x)|| <= M` on the feasible set, when it is bounded.
    pub fn gradient_bound(&self) -> Option<f64> {
        self.m_bound
    }

    pub fn sigma(&self) -> f64 {
        self.spec.sigma
    }

    /// `f*` or `Phi*` when known exactly.
    pub fn optimal_value(&self) -> Option<f64> {
        self.phi_star
    }

    /// A certified lower bound on `Phi*`.
    pub fn optimal_value_lower(&self) -> Option<f64> {
        self.phi_star_lower
    }

    pub fn minimizer(&self) -> Option<&[f64]> {
        self.x_star.as_deref()
    }

    /// Default feasible starting point.
    pub fn x1(&self) -> &[f64] {
        &self.x1
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.smooth.value(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.smooth.gradient(x)
    }

    /// `Phi(x) = f(x) + chi(x)`.
    pub fn composite_value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.smooth.value(x) + self.geometry.chi_value(x)?)
    }

    pub fn objective(&self) -> Arc<dyn Objective> {
        Arc::new(SmoothObjective { n: self.dim(), f: self.smooth.clone() })
    }

    /// Oracle with the gradient-consistent noise model at the problem's `sigma`.
    pub fn oracle(&self, mu: f64) -> Result<SmoothedOracle> {
        let noise = if self.spec.sigma > 0.0 {
            NoiseModel::GradientConsistent { sigma: self.spec.sigma }
        } else {
            NoiseModel::Noiseless
        };
        self.oracle_with(noise, mu)
    }

    pub fn oracle_with(&self, noise: NoiseModel, mu: f64) -> Result<SmoothedOracle> {
        SmoothedOracle::new(self.objective(), noise, mu, self.layout.clone())
    }

    /// Uniformly spread feasible point: uniform on boxes, flat Dirichlet on simplices,
    /// standard normal scaled by 2 on unconstrained blocks.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dim());
        for g in self.geometry.blocks() {
            match g.feasible() {
                FeasibleBlock::Box { lower, upper } => {
                    x.extend(lower.iter().zip(upper).map(|(l, u)| l + (u - l) * rng.random::<f64>()))
                }
                FeasibleBlock::Simplex { scale } => {
                    let e: Vec<f64> = (0..g.dim()).map(|_| Exp1.sample(rng)).collect();
                    let total: f64 = e.iter().sum();
                    x.extend(e.iter().map(|v| scale * v / total));
                }
                FeasibleBlock::L2Ball { center, radius } => {
                    let d = gaussian_vec(rng, g.dim());
                    let nd = norm(&d);
                    let r = radius * rng.random::<f64>().powf(1.0 / g.dim() as f64);
                    x.extend(center.iter().zip(&d).map(|(c, di)| c + r * di / nd));
                }
                FeasibleBlock::Unconstrained => {
                    x.extend((0..g.dim()).map(|_| 2.0 * Distribution::<f64>::sample(&StandardNormal, rng)))
                }
            }
        }
        x
    }

    /// Checks the declared `L_s`, `L_f` and `M` on `samples` random pairs each.
    /// Returns the worst ratios; a ratio above one is an error.
    pub fn audit(&self, samples: usize, stream: &RngStream) -> Result<AuditReport> {
        let mut rng = stream.rng();
        let tol = 1.0 + 1e-9;
        let mut block_ratio: f64 = 0.0;
        let mut full_ratio: f64 = 0.0;
        let mut gradient_ratio: f64 = 0.0;
        let b = self.layout.num_blocks();
        for _ in 0..samples {
            let x = self.random_point(&mut rng);
            let s = rng.random_range(0..b);
            let range = self.layout.range(s)?;
            let e = gaussian_vec(&mut rng, range.len());
            let mut xe = x.clone();
            for (xi, ei) in xe[range.clone()].iter_mut().zip(&e) {
                *xi += ei;
            }
            let (g, ge) = (self.gradient(&x), self.gradient(&xe));
            let diff: Vec<f64> = ge[range.clone()].iter().zip(&g[range]).map(|(p, q)| p - q).collect();
            block_ratio = block_ratio.max(norm(&diff) / (self.lipschitz.blocks[s] * norm(&e)));

            let y = self.random_point(&mut rng);
            let gy = self.gradient(&y);
            let dg: Vec<f64> = g.iter().zip(&gy).map(|(p, q)| p - q).collect();
            let dx: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p - q).collect();
            if norm(&dx) > 0.0 {
                full_ratio = full_ratio.max(norm(&dg) / (self.lipschitz.full * norm(&dx)));
            }
            if let Some(m) = self.m_bound {
                gradient_ratio = gradient_ratio.max(norm(&g) / m);
            }
        }
        let report = AuditReport { block_ratio, full_ratio, gradient_ratio: self.m_bound.map(|_| gradient_ratio) };
        if block_ratio > tol || full_ratio > tol || report.gradient_ratio.is_some_and(|r| r > tol) {
            return Err(Error::Domain(format!("declared constants of {} fail the audit: {report:?}", self.name())));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_with_unit_diagonal() {
        let b = vec![0.5, -1.0, 2.0, 0.0];
        let p = make_problem(&ProblemSpec::new("quadratic", 4, 2).with_linear(b.clone())).unwrap();
        assert_eq!(p.lipschitz().blocks, vec![1.0, 1.0]);
        assert_eq!(p.minimizer().unwrap(), b.as_slice());
        assert_eq!(p.optimal_value().unwrap(), -0.5 * b.iter().map(|v| v * v).sum::<f64>());
        assert!(norm(&p.gradient(&b)) == 0.0);
    }

    #[test]
    fn sigmoid_without_matrix() {
        let p = make_problem(&ProblemSpec::new("nonconvex_sigmoid_ls", 6, 3).with_rows(0)).unwrap();
        assert_eq!(p.optimal_value(), Some(0.0));
        let x = [1.0, 0.0, -2.0, 0.0, 0.0, 0.0];
        let expect = 0.1 * (0.5 + 0.8);
        assert!((p.value(&x) - expect).abs() < 1e-15);
        assert_eq!(p.value(&[0.0; 6]), 0.0);
    }

    #[test]
    fn every_catalog_entry_passes_its_audit() {
        for name in CATALOG {
            for seed in 0..3 {
                let spec = ProblemSpec::new(name, 12, 3).with_seed(seed);
                let spec =
                    if name == "quadratic" { spec.with_diag((1..=12).map(|i| i as f64 / 3.0).collect()) } else { spec };
                let p = make_problem(&spec).unwrap();
                p.audit(1000, &RngStream::new(seed).derive(tag::AUDIT)).unwrap();
                assert!(p.geometry().is_feasible(p.x1(), 1e-12), "{name}");
            }
        }
        let boxed = make_problem(&ProblemSpec::new("quadratic", 8, 2).with_radius(0.2)).unwrap();
        assert!(boxed.audit(1000, &RngStream::new(1)).unwrap().gradient_ratio.is_some());
    }

    #[test]
    fn spectral_constant_matches_gram_eigenvalue() {
        // orthonormal rows: A A^T = I so ||A||^2 = 1 for a single row
        let a = vec![0.6, 0.8];
        assert!((gram_norm(&a, 1, 2, 0..2, 0) - 1.0).abs() < 1e-8);
        assert!((gram_norm(&a, 1, 2, 1..2, 0) - 0.64).abs() < 1e-8);
    }

    #[test]
    fn simplex_minimizer_is_stationary() {
        let spec = ProblemSpec::new("simplex_entropy", 6, 2).with_diag(vec![1.0, 2.0, 3.0, 1.0, 1.0, 4.0]);
        let p = make_problem(&spec).unwrap();
        let x = p.minimizer().unwrap().to_vec();
        assert!(p.geometry().is_feasible(&x, 1e-12));
        // no feasible direction improves Phi: check against random points
        let mut rng = RngStream::new(4).rng();
        let best = p.composite_value(&x).unwrap();
        for _ in 0..500 {
            let y = p.random_point(&mut rng);
            assert!(p.composite_value(&y).unwrap() >= best - 1e-12);
        }
        let mut spec = spec;
        spec.entropy_weight = 0.3;
        let q = make_problem(&spec).unwrap();
        let xq = q.minimizer().unwrap().to_vec();
        let best = q.composite_value(&xq).unwrap();
        for _ in 0..500 {
            let y = q.random_point(&mut rng);
            assert!(q.composite_value(&y).unwrap() >= best - 1e-12);
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(make_problem(&ProblemSpec::new("rosenbrock", 2, 1)), Err(Error::Unknown { .. })));
    }
}
