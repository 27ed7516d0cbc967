use super::{grad_phi, BlockGeometry, DistanceGenerator};
use crate::block::dot;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_INNER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CndgOutput {
    pub point: Vec<f64>,
    /// Number of linear minimization calls, including the terminating one.
    pub inner_iterations: usize,
    /// `V(v_{t+1})` at termination, at least `-delta`.
    pub final_gap: f64,
}

/// Inexact prox by conditional gradient steps on
/// `<g, u> + D_phi(u, x) / alpha + chi(u)`; stops when
/// `V(v) = <g + (grad phi(u_t) - grad phi(x)) / alpha, v - u_t> + chi(v) - chi(u_t) >= -delta`.
pub fn cndg(
    geom: &BlockGeometry,
    x: &[f64],
    g: &[f64],
    alpha: f64,
    delta: f64,
    max_inner: usize,
) -> Result<CndgOutput> {
    if geom.phi() != DistanceGenerator::Euclidean {
        return Err(Error::UnsupportedGeometry(
            "the conditional gradient prox is implemented for the euclidean distance generator only".into(),
        ));
    }
    if !geom.is_bounded() {
        return Err(Error::UnsupportedGeometry("the conditional gradient prox needs a bounded block".into()));
    }
    if !(alpha > 0.0 && alpha.is_finite()) || !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Config(format!("cndg needs positive alpha and delta, got {alpha}, {delta}")));
    }
    if x.len() != geom.dim() || g.len() != geom.dim() {
        return Err(Error::Dimension { expected: geom.dim(), got: x.len().min(g.len()) });
    }

    let grad_x = grad_phi(geom.phi(), x);
    let mut u = x.to_vec();
    let mut chi_u = geom.chi_value(&u);
    let mut gap = f64::NEG_INFINITY;
    for t in 1..=max_inner {
        let gu = grad_phi(geom.phi(), &u);
        let h: Vec<f64> = g.iter().zip(gu.iter().zip(&grad_x)).map(|(gi, (a, b))| gi + (a - b) / alpha).collect();
        let v = geom.lmo(&h)?;
        let diff: Vec<f64> = v.iter().zip(&u).map(|(a, b)| a - b).collect();
        gap = dot(&h, &diff) + geom.chi_value(&v) - chi_u;
        if gap >= -delta {
            return Ok(CndgOutput { point: u, inner_iterations: t, final_gap: gap });
        }
        let step = 2.0 / (t as f64 + 1.0);
        for (ui, vi) in u.iter_mut().zip(&v) {
            *ui = (1.0 - step) * *ui + step * vi;
        }
        chi_u = geom.chi_value(&u);
    }
    Err(Error::NonTermination { iterations: max_inner, last_gap: gap })
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::block::dist_sq;
    use crate::rng::{gaussian_vec, RngStream};
    use rand::Rng;

    fn unit_box(k: usize) -> BlockGeometry {
        BlockGeometry::euclidean_box(vec![-1.0; k], vec![1.0; k]).unwrap()
    }

    #[test]
    fn large_delta_returns_start_after_one_call() {
        let geom = unit_box(3);
        let x = [0.2, -0.3, 0.9];
        let out = cndg(&geom, &x, &[1.0, -2.0, 0.5], 0.5, 1e6, 10).unwrap();
        assert_eq!(out.point, x.to_vec());
        assert_eq!(out.inner_iterations, 1);
    }

    #[test]
    fn zero_gradient_keeps_x() {
        let geom = unit_box(2);
        let out = cndg(&geom, &[0.1, 0.4], &[0.0, 0.0], 0.3, 1e-8, 10).unwrap();
        assert_eq!(out.point, vec![0.1, 0.4]);
        assert_eq!(out.final_gap, 0.0);
    }

    #[test]
    fn close_to_closed_form_prox() {
        let mut rng = RngStream::new(12).rng();
        for trial in 0..200 {
            let k = 1 + trial % 3;
            let geom = unit_box(k);
            let x = geom.project(&gaussian_vec(&mut rng, k));
            let g = gaussian_vec(&mut rng, k);
            let alpha = if trial % 2 == 0 { 0.1 } else { 1.0 };
            let delta = if trial % 4 < 2 { 1e-2 } else { 1e-4 };
            let out = cndg(&geom, &x, &g, alpha, delta, DEFAULT_MAX_INNER).unwrap();
            let p = geom.prox(&x, &g, alpha).unwrap();
            assert!(geom.is_feasible(&out.point, 1e-12));
            assert!(dist_sq(&out.point, &p) <= alpha * delta, "trial {trial}");
        }
    }

    #[test]
    fn l1_regularized_box() {
        let geom = BlockGeometry::new(
            2,
            FeasibleBlock::Box { lower: vec![-1.0; 2], upper: vec![1.0; 2] },
            DistanceGenerator::Euclidean,
            Regularizer::L1 { weight: 0.5 },
        )
        .unwrap();
        let mut rng = RngStream::new(13).rng();
        for _ in 0..100 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g = gaussian_vec(&mut rng, 2);
            let out = cndg(&geom, &x, &g, 0.5, 1e-3, DEFAULT_MAX_INNER).unwrap();
            let p = geom.prox(&x, &g, 0.5).unwrap();
            assert!(dist_sq(&out.point, &p) <= 0.5 * 1e-3);
        }
    }

    #[test]
    fn cap_and_geometry_errors() {
        let geom = unit_box(2);
        let err = cndg(&geom, &[0.0, 0.0], &[0.3, -0.2], 1.0, 1e-12, 3).unwrap_err();
        assert!(matches!(err, Error::NonTermination { iterations: 3, last_gap } if last_gap < 0.0));
        assert!(cndg(&BlockGeometry::unconstrained(2), &[0.0; 2], &[1.0; 2], 1.0, 1.0, 5).is_err());
        let ent =
            BlockGeometry::new(2, FeasibleBlock::Simplex { scale: 1.0 }, DistanceGenerator::Entropy, Regularizer::Zero)
                .unwrap();
        assert!(matches!(cndg(&ent, &[0.5, 0.5], &[1.0, 0.0], 1.0, 1.0, 5), Err(Error::UnsupportedGeometry(_))));
    }
}
