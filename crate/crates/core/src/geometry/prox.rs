use super::{BlockGeometry, DistanceGenerator, FeasibleBlock, Regularizer, ENTROPY_FLOOR};

/// Closed-form `argmin_y <g, y> + D_phi(y, x) / alpha + chi(y)` for a validated triple.
pub(super) fn block_prox(geom: &BlockGeometry, x: &[f64], g: &[f64], alpha: f64) -> Vec<f64> {
    match (geom.phi, geom.chi) {
        (DistanceGenerator::Euclidean, Regularizer::Zero) => {
            let step: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - alpha * b).collect();
            geom.project(&step)
        }
        (DistanceGenerator::Euclidean, Regularizer::L1 { weight }) => {
            // soft-threshold and box clipping commute coordinatewise
            let t = alpha * weight;
            let step: Vec<f64> = x
                .iter()
                .zip(g)
                .map(|(a, b)| {
                    let z = a - alpha * b;
                    z.signum() * (z.abs() - t).max(0.0)
                })
                .collect();
            geom.project(&step)
        }
        (DistanceGenerator::Entropy, chi) => {
            let scale = match geom.feasible {
                FeasibleBlock::Simplex { scale } => scale,
                _ => unreachable!("entropy prox is validated to live on a simplex"),
            };
            let w = match chi {
                Regularizer::Entropy { weight } => weight,
                _ => 0.0,
            };
            let damp = 1.0 + alpha * w;
            let logits: Vec<f64> =
                x.iter().zip(g).map(|(a, b)| (a.max(ENTROPY_FLOOR).ln() - alpha * b) / damp).collect();
            softmax_scaled(&logits, scale)
        }
        (DistanceGenerator::Euclidean, Regularizer::Entropy { .. }) => {
            unreachable!("rejected at construction")
        }
    }
}

/// `scale * exp(l) / sum exp(l)`, computed stably.
pub(super) fn softmax_scaled(logits: &[f64], scale: f64) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|v| scale * v / z).collect()
}
