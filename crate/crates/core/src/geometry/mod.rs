//! Per-block convex geometry: feasible sets, distance generators, regularizers,
//! the Bregman prox, the generalized gradient mapping, linear minimization
//! oracles and the inexact conditional-gradient prox.

mod cndg;
mod lmo;
mod prox;
mod simplex;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::block::{dist_sq, norm, BlockLayout};
use crate::error::{Error, Result};

pub use cndg::{cndg, CndgOutput, DEFAULT_MAX_INNER};
pub use simplex::project_simplex;

/// Coordinates of entropy arguments are clamped to this floor before logarithms.
pub const ENTROPY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleBlock {
    Unconstrained,
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    L2Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `{y >= 0, sum y = scale}`.
    Simplex {
        scale: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceGenerator {
    /// `phi(x) = ||x||^2 / 2`
    Euclidean,
    /// `phi(x) = sum x_i ln x_i`
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularizer {
    Zero,
    L1 { weight: f64 },
    Entropy { weight: f64 },
}

impl Regularizer {
    pub fn value(&self, y: &[f64]) -> f64 {
        match *self {
            Regularizer::Zero => 0.0,
            Regularizer::L1 { weight } => weight * y.iter().map(|v| v.abs()).sum::<f64>(),
            Regularizer::Entropy { weight } => weight * y.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>(),
        }
    }

    fn weight(&self) -> f64 {
        match *self {
            Regularizer::Zero => 0.0,
            Regularizer::L1 { weight } | Regularizer::Entropy { weight } => weight,
        }
    }
}

/// Bregman divergence `D_phi(x, y) = phi(x) - phi(y) - <grad phi(y), x - y>`.
pub fn bregman_div(phi: DistanceGenerator, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: y.len(), got: x.len() });
    }
    match phi {
        DistanceGenerator::Euclidean => Ok(0.5 * dist_sq(x, y)),
        DistanceGenerator::Entropy => {
            if let Some(v) = y.iter().find(|v| !(**v > 0.0)) {
                return Err(Error::Domain(format!("entropy divergence needs positive y, got {v}")));
            }
            if let Some(v) = x.iter().find(|v| !(**v >= 0.0)) {
                return Err(Error::Domain(format!("entropy divergence needs nonnegative x, got {v}")));
            }
            Ok(x.iter()
                .zip(y)
                .map(|(&a, &b)| {
                    let b = b.max(ENTROPY_FLOOR);
                    let xlog = if a > 0.0 { a * (a / b).ln() } else { 0.0 };
                    xlog - a + b
                })
                .sum())
        }
    }
}

pub(crate) fn grad_phi(phi: DistanceGenerator, x: &[f64]) -> Vec<f64> {
    match phi {
        DistanceGenerator::Euclidean => x.to_vec(),
        DistanceGenerator::Entropy => x.iter().map(|v| v.max(ENTROPY_FLOOR).ln() + 1.0).collect(),
    }
}

/// A validated `(X_s, phi_s, chi_s)` triple with a closed-form prox.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockGeometrySpec", into = "BlockGeometrySpec")]
pub struct BlockGeometry {
    dim: usize,
    feasible: FeasibleBlock,
    phi: DistanceGenerator,
    chi: Regularizer,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockGeometrySpec {
    pub dim: usize,
    pub feasible: FeasibleBlock,
    pub phi: DistanceGenerator,
    pub chi: Regularizer,
}

impl TryFrom<BlockGeometrySpec> for BlockGeometry {
    type Error = Error;

    fn try_from(s: BlockGeometrySpec) -> Result<Self> {
        Self::new(s.dim, s.feasible, s.phi, s.chi)
    }
}

impl From<BlockGeometry> for BlockGeometrySpec {
    fn from(g: BlockGeometry) -> Self {
        Self { dim: g.dim, feasible: g.feasible, phi: g.phi, chi: g.chi }
    }
}

impl BlockGeometry {
    pub fn new(dim: usize, feasible: FeasibleBlock, phi: DistanceGenerator, chi: Regularizer) -> Result<Self> {
        use DistanceGenerator as P;
        use FeasibleBlock as F;
        use Regularizer as R;

        if dim == 0 {
            return Err(Error::Config("block dimension must be positive".into()));
        }
        match &feasible {
            F::Unconstrained => {}
            F::Box { lower, upper } => {
                for v in [lower, upper] {
                    if v.len() != dim {
                        return Err(Error::Dimension { expected: dim, got: v.len() });
                    }
                }
                if let Some(i) =
                    (0..dim).find(|&i| !(lower[i] < upper[i]) || !lower[i].is_finite() || !upper[i].is_finite())
                {
                    return Err(Error::Config(format!(
                        "box needs finite lower < upper, coordinate {i} has [{}, {}]",
                        lower[i], upper[i]
                    )));
                }
            }
            F::L2Ball { center, radius } => {
                if center.len() != dim {
                    return Err(Error::Dimension { expected: dim, got: center.len() });
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Config(format!("ball radius must be positive, got {radius}")));
                }
            }
            F::Simplex { scale } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(Error::Config(format!("simplex scale must be positive, got {scale}")));
                }
            }
        }
        let w = chi.weight();
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::Config(format!("regularizer weight must be nonnegative, got {w}")));
        }

        let supported = matches!(
            (&feasible, phi, chi),
            (F::Unconstrained | F::Box { .. } | F::L2Ball { .. }, P::Euclidean, R::Zero)
                | (F::Unconstrained | F::Box { .. }, P::Euclidean, R::L1 { .. })
                | (F::Simplex { .. }, P::Euclidean, R::Zero)
                | (F::Simplex { .. }, P::Entropy, R::Zero | R::Entropy { .. })
        );
        if !supported {
            return Err(Error::UnsupportedGeometry(format!(
                "no closed-form prox for ({}, {phi:?}, {chi:?})",
                feasible.kind_name()
            )));
        }
        if let (F::Simplex { scale }, P::Entropy) = (&feasible, phi) {
            // entropy is (1/scale)-strongly convex in l2 on the simplex
            if *scale > 1.0 {
                return Err(Error::UnsupportedGeometry(format!(
                    "entropy distance generator needs simplex scale <= 1 for unit strong convexity, got {scale}"
                )));
            }
        }
        Ok(Self { dim, feasible, phi, chi })
    }

    pub fn euclidean_box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(lower.len(), FeasibleBlock::Box { lower, upper }, DistanceGenerator::Euclidean, Regularizer::Zero)
    }

    pub fn unconstrained(dim: usize) -> Self {
        Self { dim, feasible: FeasibleBlock::Unconstrained, phi: DistanceGenerator::Euclidean, chi: Regularizer::Zero }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn feasible(&self) -> &FeasibleBlock {
        &self.feasible
    }

    pub fn phi(&self) -> DistanceGenerator {
        self.phi
    }

    pub fn chi(&self) -> Regularizer {
        self.chi
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self.feasible, FeasibleBlock::Unconstrained)
    }

    /// `D_{X_s}`; `None` for unbounded blocks.
    pub fn diameter(&self) -> Option<f64> {
        match &self.feasible {
            FeasibleBlock::Unconstrained => None,
            FeasibleBlock::Box { lower, upper } => Some(dist_sq(lower, upper).sqrt()),
            FeasibleBlock::L2Ball { radius, .. } => Some(2.0 * radius),
            FeasibleBlock::Simplex { scale } => Some(scale * std::f64::consts::SQRT_2),
        }
    }

    pub fn chi_value(&self, y: &[f64]) -> f64 {
        self.chi.value(y)
    }

    pub fn is_feasible(&self, y: &[f64], tol: f64) -> bool {
        if y.len() != self.dim || y.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match &self.feasible {
            FeasibleBlock::Unconstrained => true,
            FeasibleBlock::Box { lower, upper } => {
                y.iter().zip(lower.iter().zip(upper)).all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol)
            }
            FeasibleBlock::L2Ball { center, radius } => dist_sq(y, center).sqrt() <= radius + tol,
            FeasibleBlock::Simplex { scale } => {
                y.iter().all(|v| *v >= -tol) && (y.iter().sum::<f64>() - scale).abs() <= tol * scale.max(1.0)
            }
        }
    }

    /// Euclidean projection onto `X_s`.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        match &self.feasible {
            FeasibleBlock::Unconstrained => y.to_vec(),
            FeasibleBlock::Box { lower, upper } => {
                y.iter().zip(lower.iter().zip(upper)).map(|(v, (lo, hi))| v.clamp(*lo, *hi)).collect()
            }
            FeasibleBlock::L2Ball { center, radius } => {
                let d: Vec<f64> = y.iter().zip(center).map(|(a, c)| a - c).collect();
                let r = norm(&d);
                if r <= *radius {
                    y.to_vec()
                } else {
                    center.iter().zip(&d).map(|(c, v)| c + v * radius / r).collect()
                }
            }
            FeasibleBlock::Simplex { scale } => project_simplex(y, *scale),
        }
    }

    /// Bregman prox `P_s(x, g, alpha)`.
    pub fn prox(&self, x: &[f64], g: &[f64], alpha: f64) -> Result<Vec<f64>> {
        self.check_dims(x, g)?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Config(format!("stepsize must be positive, got {alpha}")));
        }
        Ok(prox::block_prox(self, x, g, alpha))
    }

    /// `(x - P_s(x, g, alpha)) / alpha`.
    pub fn mapping(&self, x: &[f64], g: &[f64], alpha: f64) -> Result<Vec<f64>> {
        let p = self.prox(x, g, alpha)?;
        Ok(x.iter().zip(&p).map(|(a, b)| (a - b) / alpha).collect())
    }

    /// `argmin_{y in X_s} <g, y> + chi_s(y)`.
    pub fn lmo(&self, g: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: g.len() });
        }
        lmo::block_lmo(self, g)
    }

    /// `argmin_{y in X_s} <g, y>`, ignoring the regularizer.
    pub fn linear_lmo(&self, g: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: g.len() });
        }
        lmo::block_lmo(&BlockGeometry { chi: Regularizer::Zero, ..self.clone() }, g)
    }

    fn check_dims(&self, x: &[f64], g: &[f64]) -> Result<()> {
        for v in [x, g] {
            if v.len() != self.dim {
                return Err(Error::Dimension { expected: self.dim, got: v.len() });
            }
        }
        Ok(())
    }
}

impl FeasibleBlock {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FeasibleBlock::Unconstrained => "unconstrained",
            FeasibleBlock::Box { .. } => "box",
            FeasibleBlock::L2Ball { .. } => "l2_ball",
            FeasibleBlock::Simplex { .. } => "simplex",
        }
    }
}

/// Product geometry `X = X_1 x ... x X_b` over a block layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    layout: Arc<BlockLayout>,
    blocks: Vec<BlockGeometry>,
}

impl Geometry {
    pub fn new(layout: Arc<BlockLayout>, blocks: Vec<BlockGeometry>) -> Result<Self> {
        if blocks.len() != layout.num_blocks() {
            return Err(Error::Dimension { expected: layout.num_blocks(), got: blocks.len() });
        }
        for (s, g) in blocks.iter().enumerate() {
            if g.dim() != layout.sizes()[s] {
                return Err(Error::Dimension { expected: layout.sizes()[s], got: g.dim() });
            }
        }
        Ok(Self { layout, blocks })
    }

    /// Unconstrained euclidean geometry with zero regularizer on every block.
    pub fn unconstrained(layout: Arc<BlockLayout>) -> Self {
        let blocks = layout.sizes().iter().map(|&k| BlockGeometry::unconstrained(k)).collect();
        Self { layout, blocks }
    }

    /// The same box `[lo, hi]` and regularizer on every coordinate.
    pub fn uniform_box(layout: Arc<BlockLayout>, lo: f64, hi: f64, chi: Regularizer) -> Result<Self> {
        let blocks = layout
            .sizes()
            .iter()
            .map(|&k| {
                BlockGeometry::new(
                    k,
                    FeasibleBlock::Box { lower: vec![lo; k], upper: vec![hi; k] },
                    DistanceGenerator::Euclidean,
                    chi,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(layout, blocks)
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn layout_arc(&self) -> Arc<BlockLayout> {
        self.layout.clone()
    }

    pub fn blocks(&self) -> &[BlockGeometry] {
        &self.blocks
    }

    pub fn block(&self, s: usize) -> Result<&BlockGeometry> {
        self.blocks.get(s).ok_or(Error::BlockIndex { index: s, blocks: self.blocks.len() })
    }

    pub fn is_bounded(&self) -> bool {
        self.blocks.iter().all(BlockGeometry::is_bounded)
    }

    pub fn has_regularizer(&self) -> bool {
        self.blocks.iter().any(|g| g.chi() != Regularizer::Zero)
    }

    pub fn diameters(&self) -> Option<Vec<f64>> {
        self.blocks.iter().map(BlockGeometry::diameter).collect()
    }

    pub fn chi_value(&self, x: &[f64]) -> Result<f64> {
        self.layout.check_len(x)?;
        Ok((0..self.blocks.len())
            .map(|s| self.blocks[s].chi_value(&x[self.layout.range(s).expect("valid block")]))
            .sum())
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.layout.dim()
            && (0..self.blocks.len())
                .all(|s| self.blocks[s].is_feasible(&x[self.layout.range(s).expect("valid block")], tol))
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.layout.check_len(x)?;
        let parts: Vec<Vec<f64>> =
            (0..self.blocks.len()).map(|s| self.blocks[s].project(self.layout.view(x, s).unwrap())).collect();
        self.layout.gather(&parts)
    }

    /// Block `s` of `P(x, g, alpha)` from full vectors.
    pub fn block_prox(&self, x: &[f64], g: &[f64], s: usize, alpha: f64) -> Result<Vec<f64>> {
        let geom = self.block(s)?;
        geom.prox(self.layout.view(x, s)?, self.layout.view(g, s)?, alpha)
    }

    /// Full prox, stacking every block.
    pub fn prox(&self, x: &[f64], g: &[f64], alpha: f64) -> Result<Vec<f64>> {
        self.layout.check_len(g)?;
        let parts = (0..self.blocks.len()).map(|s| self.block_prox(x, g, s, alpha)).collect::<Result<Vec<_>>>()?;
        self.layout.gather(&parts)
    }

    /// Generalized gradient mapping `(x - P(x, g, alpha)) / alpha` stacked over all blocks.
    pub fn gradient_mapping(&self, x: &[f64], g: &[f64], alpha: f64) -> Result<Vec<f64>> {
        let p = self.prox(x, g, alpha)?;
        Ok(x.iter().zip(&p).map(|(a, b)| (a - b) / alpha).collect())
    }

    /// Full composite LMO as the concatenation of block LMOs.
    pub fn lmo(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.layout.check_len(g)?;
        let parts = (0..self.blocks.len())
            .map(|s| self.blocks[s].lmo(self.layout.view(g, s).unwrap()))
            .collect::<Result<Vec<_>>>()?;
        self.layout.gather(&parts)
    }

    /// Full linear LMO (regularizer ignored).
    pub fn linear_lmo(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.layout.check_len(g)?;
        let parts = (0..self.blocks.len())
            .map(|s| self.blocks[s].linear_lmo(self.layout.view(g, s).unwrap()))
            .collect::<Result<Vec<_>>>()?;
        self.layout.gather(&parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(lo: f64, hi: f64, chi: Regularizer) -> BlockGeometry {
        BlockGeometry::new(
            1,
            FeasibleBlock::Box { lower: vec![lo], upper: vec![hi] },
            DistanceGenerator::Euclidean,
            chi,
        )
        .unwrap()
    }

    fn simplex(dim: usize, scale: f64, phi: DistanceGenerator, chi: Regularizer) -> BlockGeometry {
        BlockGeometry::new(dim, FeasibleBlock::Simplex { scale }, phi, chi).unwrap()
    }

    #[test]
    fn bregman_examples() {
        let e = DistanceGenerator::Euclidean;
        assert_eq!(bregman_div(e, &[0.3, -2.0], &[0.3, -2.0]).unwrap(), 0.0);
        assert_eq!(bregman_div(e, &[1.0, 0.0], &[0.0, 0.0]).unwrap(), 0.5);
        let kl = bregman_div(DistanceGenerator::Entropy, &[0.5, 0.5], &[0.9, 0.1]).unwrap();
        let scalar_kl = |p: f64, q: f64| p * (p / q).ln() + (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln();
        assert!((kl - scalar_kl(0.5, 0.9)).abs() < 1e-14);
        assert!((kl - 0.5108).abs() < 1e-4);
        assert!(matches!(bregman_div(DistanceGenerator::Entropy, &[0.5, 0.5], &[1.0, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn prox_examples() {
        let g = interval(-1.0, 1.0, Regularizer::Zero);
        assert_eq!(g.prox(&[0.5], &[2.0], 0.5).unwrap(), vec![-0.5]);

        let s = simplex(2, 1.0, DistanceGenerator::Entropy, Regularizer::Zero);
        let x = [0.3, 0.7];
        let p = s.prox(&x, &[0.0, 0.0], 0.7).unwrap();
        assert!((p[0] - 0.3).abs() < 1e-15 && (p[1] - 0.7).abs() < 1e-15);

        let l1 = BlockGeometry::new(
            1,
            FeasibleBlock::Unconstrained,
            DistanceGenerator::Euclidean,
            Regularizer::L1 { weight: 1.0 },
        )
        .unwrap();
        let y = l1.prox(&[2.0], &[0.0], 1.0).unwrap()[0];
        assert_eq!(y, 1.0);
        // grid search oracle over [-5, 5]
        let obj = |v: f64| 0.5 * (v - 2.0).powi(2) + v.abs();
        let best = (0..=100_000).map(|i| -5.0 + 1e-4 * i as f64).min_by(|a, b| obj(*a).total_cmp(&obj(*b))).unwrap();
        assert!((best - y).abs() <= 1e-4);
    }

    #[test]
    fn mapping_examples() {
        let layout = Arc::new(BlockLayout::new(vec![2, 1]).unwrap());
        let geo = Geometry::unconstrained(layout.clone());
        let g = [0.3, -1.0, 2.5];
        let m = geo.gradient_mapping(&[1.0, 2.0, 3.0], &g, 0.37).unwrap();
        for (a, b) in m.iter().zip(&g) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(geo.gradient_mapping(&[1.0, 2.0, 3.0], &[0.0; 3], 0.5).unwrap(), vec![0.0; 3]);

        let b = interval(-1.0, 1.0, Regularizer::Zero);
        assert_eq!(b.prox(&[1.0], &[-3.0], 0.1).unwrap(), vec![1.0]);
        assert_eq!(b.mapping(&[1.0], &[-3.0], 0.1).unwrap(), vec![0.0]);
    }

    #[test]
    fn lmo_examples() {
        let b = BlockGeometry::euclidean_box(vec![-1.0; 2], vec![1.0; 2]).unwrap();
        assert_eq!(b.lmo(&[1.0, -2.0]).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(b.lmo(&[0.0, 0.0]).unwrap(), vec![-1.0, -1.0]);

        let s = simplex(2, 1.0, DistanceGenerator::Euclidean, Regularizer::Zero);
        assert_eq!(s.lmo(&[0.1, 0.5]).unwrap(), vec![1.0, 0.0]);

        let c = interval(-1.0, 1.0, Regularizer::L1 { weight: 3.0 });
        let v = c.lmo(&[1.0]).unwrap()[0];
        assert_eq!(v, 0.0);
        let obj = |y: f64| y + 3.0 * y.abs();
        let best = (0..=20_000).map(|i| -1.0 + 1e-4 * i as f64).min_by(|a, b| obj(*a).total_cmp(&obj(*b))).unwrap();
        assert!((best - v).abs() <= 1e-4);

        assert!(BlockGeometry::unconstrained(2).lmo(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn ball_lmo_and_projection() {
        let b = BlockGeometry::new(
            2,
            FeasibleBlock::L2Ball { center: vec![1.0, 1.0], radius: 2.0 },
            DistanceGenerator::Euclidean,
            Regularizer::Zero,
        )
        .unwrap();
        let v = b.lmo(&[3.0, 4.0]).unwrap();
        assert!((v[0] - (1.0 - 1.2)).abs() < 1e-15 && (v[1] - (1.0 - 1.6)).abs() < 1e-15);
        let p = b.project(&[1.0, 5.0]);
        assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] - 3.0).abs() < 1e-15);
        assert_eq!(b.diameter(), Some(4.0));
    }

    #[test]
    fn entropy_regularized_lmo_is_softmax() {
        let s = simplex(3, 1.0, DistanceGenerator::Entropy, Regularizer::Entropy { weight: 0.5 });
        let g = [0.2, -0.1, 0.4];
        let v = s.lmo(&g).unwrap();
        let z: f64 = g.iter().map(|a| (-a / 0.5).exp()).sum();
        for (vi, gi) in v.iter().zip(&g) {
            assert!((vi - (-gi / 0.5).exp() / z).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_unsupported_triples() {
        assert!(matches!(
            BlockGeometry::new(
                2,
                FeasibleBlock::L2Ball { center: vec![0.0; 2], radius: 1.0 },
                DistanceGenerator::Euclidean,
                Regularizer::L1 { weight: 1.0 }
            ),
            Err(Error::UnsupportedGeometry(_))
        ));
        assert!(
            BlockGeometry::new(2, FeasibleBlock::Unconstrained, DistanceGenerator::Entropy, Regularizer::Zero).is_err()
        );
        assert!(BlockGeometry::new(
            2,
            FeasibleBlock::Simplex { scale: 2.0 },
            DistanceGenerator::Entropy,
            Regularizer::Zero
        )
        .is_err());
        assert!(BlockGeometry::euclidean_box(vec![1.0], vec![1.0]).is_err());
        assert!(BlockGeometry::new(
            1,
            FeasibleBlock::Box { lower: vec![0.0], upper: vec![1.0] },
            DistanceGenerator::Euclidean,
            Regularizer::L1 { weight: -1.0 }
        )
        .is_err());
    }

    #[test]
    fn diameters() {
        assert_eq!(BlockGeometry::euclidean_box(vec![0.0, 0.0], vec![3.0, 4.0]).unwrap().diameter(), Some(5.0));
        let s = simplex(3, 0.5, DistanceGenerator::Entropy, Regularizer::Zero);
        assert!((s.diameter().unwrap() - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(BlockGeometry::unconstrained(3).diameter(), None);
    }

    #[test]
    fn spec_conversion_round_trips_and_validates() {
        let b = simplex(3, 1.0, DistanceGenerator::Entropy, Regularizer::Entropy { weight: 0.1 });
        let spec: BlockGeometrySpec = b.clone().into();
        assert_eq!(BlockGeometry::try_from(spec).unwrap(), b);
        let bad = BlockGeometrySpec {
            dim: 2,
            feasible: FeasibleBlock::Simplex { scale: 3.0 },
            phi: DistanceGenerator::Entropy,
            chi: Regularizer::Zero,
        };
        assert!(BlockGeometry::try_from(bad).is_err());
    }
}
