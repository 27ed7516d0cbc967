use super::prox::softmax_scaled;
use super::{BlockGeometry, FeasibleBlock, Regularizer};
use crate::block::norm;
use crate::error::{Error, Result};

pub(super) fn block_lmo(geom: &BlockGeometry, g: &[f64]) -> Result<Vec<f64>> {
    match (&geom.feasible, geom.chi) {
        (FeasibleBlock::Box { lower, upper }, Regularizer::Zero) => {
            Ok(g.iter().zip(lower.iter().zip(upper)).map(|(gi, (lo, hi))| if *gi >= 0.0 { *lo } else { *hi }).collect())
        }
        (FeasibleBlock::Box { lower, upper }, Regularizer::L1 { weight }) => Ok(g
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(gi, (lo, hi))| {
                let value = |y: f64| gi * y + weight * y.abs();
                let mut best = *lo;
                if *lo < 0.0 && 0.0 < *hi && value(0.0) < value(best) {
                    best = 0.0;
                }
                if value(*hi) < value(best) {
                    best = *hi;
                }
                best
            })
            .collect()),
        (FeasibleBlock::L2Ball { center, radius }, Regularizer::Zero) => {
            let r = norm(g);
            if r == 0.0 {
                return Ok(center.clone());
            }
            Ok(center.iter().zip(g).map(|(c, gi)| c - radius * gi / r).collect())
        }
        (FeasibleBlock::Simplex { scale }, Regularizer::Zero) => {
            let mut arg = 0;
            for (i, v) in g.iter().enumerate() {
                if *v < g[arg] {
                    arg = i;
                }
            }
            let mut out = vec![0.0; g.len()];
            out[arg] = *scale;
            Ok(out)
        }
        (FeasibleBlock::Simplex { scale }, Regularizer::Entropy { weight }) if weight > 0.0 => {
            let logits: Vec<f64> = g.iter().map(|v| -v / weight).collect();
            Ok(softmax_scaled(&logits, *scale))
        }
        (FeasibleBlock::Simplex { .. }, Regularizer::Entropy { .. }) => {
            block_lmo(&BlockGeometry { chi: Regularizer::Zero, ..geom.clone() }, g)
        }
        (FeasibleBlock::Unconstrained, Regularizer::L1 { weight }) => {
            if g.iter().all(|v| v.abs() <= weight) {
                Ok(vec![0.0; g.len()])
            } else {
                Err(Error::Domain("linear minimization is unbounded: |g| exceeds the l1 weight".into()))
            }
        }
        (FeasibleBlock::Unconstrained, _) => {
            Err(Error::Domain("linear minimization over an unconstrained block is unbounded".into()))
        }
        (f, chi) => {
            Err(Error::UnsupportedGeometry(format!("no linear minimization oracle for ({}, {chi:?})", f.kind_name())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::block::dot;
    use crate::rng::{gaussian_vec, RngStream};
    use rand::Rng;

    #[test]
    fn box_l1_lmo_beats_random_feasible_points() {
        let geom = BlockGeometry::new(
            3,
            FeasibleBlock::Box { lower: vec![-1.0, 0.5, -2.0], upper: vec![1.0, 2.0, -0.5] },
            DistanceGenerator::Euclidean,
            Regularizer::L1 { weight: 0.8 },
        )
        .unwrap();
        let mut rng = RngStream::new(5).rng();
        for _ in 0..200 {
            let g = gaussian_vec(&mut rng, 3);
            let v = geom.lmo(&g).unwrap();
            let fv = dot(&g, &v) + geom.chi_value(&v);
            for _ in 0..50 {
                let y = geom.project(&gaussian_vec(&mut rng, 3).iter().map(|a| 2.0 * a).collect::<Vec<_>>());
                assert!(fv <= dot(&g, &y) + geom.chi_value(&y) + 1e-12);
            }
        }
    }

    #[test]
    fn unconstrained_l1_lmo_is_zero_or_unbounded() {
        let geom = BlockGeometry::new(
            2,
            FeasibleBlock::Unconstrained,
            DistanceGenerator::Euclidean,
            Regularizer::L1 { weight: 1.0 },
        )
        .unwrap();
        assert_eq!(geom.lmo(&[0.5, -1.0]).unwrap(), vec![0.0, 0.0]);
        assert!(geom.lmo(&[1.5, 0.0]).is_err());
    }

    #[test]
    fn simplex_lmo_first_minimum_wins() {
        let geom = BlockGeometry::new(
            3,
            FeasibleBlock::Simplex { scale: 2.0 },
            DistanceGenerator::Euclidean,
            Regularizer::Zero,
        )
        .unwrap();
        assert_eq!(geom.lmo(&[0.3, -1.0, -1.0]).unwrap(), vec![0.0, 2.0, 0.0]);
        let mut rng = RngStream::new(6).rng();
        let g = gaussian_vec(&mut rng, 3);
        let v = geom.lmo(&g).unwrap();
        let w: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
        let z: f64 = w.iter().sum();
        let y: Vec<f64> = w.iter().map(|a| 2.0 * a / z).collect();
        assert!(dot(&g, &v) <= dot(&g, &y));
    }
}
