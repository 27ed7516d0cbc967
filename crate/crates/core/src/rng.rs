//! Hierarchically keyed random streams.
//!
//! A stream is identified by a master seed plus a path of integer ids
//! (run, purpose, iteration, sample). Each path maps to its own ChaCha8
//! generator, so a draw never depends on how many draws other paths made or
//! in which order threads evaluated them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Purpose tags used as the second level of solver stream paths.
pub mod tag {
    pub const BLOCK: u64 = 1;
    pub const OUTPUT: u64 = 2;
    pub const ESTIMATOR: u64 = 3;
    pub const POST: u64 = 4;
    pub const NOISE: u64 = 5;
    pub const AUDIT: u64 = 6;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
    key: u64,
    depth: u32,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, key: splitmix(seed ^ 0x243f_6a88_85a3_08d3), depth: 0 }
    }

    /// Child stream one level down the path.
    pub fn derive(&self, id: u64) -> Self {
        let key = splitmix(
            self.key ^ splitmix(id.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(self.depth as u64 + 1))),
        );
        Self { seed: self.seed, key, depth: self.depth + 1 }
    }

    pub fn path(&self, ids: &[u64]) -> Self {
        ids.iter().fold(*self, |s, &id| s.derive(id))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }
}

/// Standard normal vector of length `n` drawn from `rng`.
pub fn gaussian_vec<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// `u ~ N(0, I_n)`, deterministic given the stream.
pub fn gaussian_direction(stream: &RngStream, n: usize) -> Vec<f64> {
    gaussian_vec(&mut stream.rng(), n)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_path_same_draws() {
        let a = RngStream::new(7).path(&[1, 2, 3]);
        let b = RngStream::new(7).derive(1).derive(2).derive(3);
        assert_eq!(gaussian_direction(&a, 8), gaussian_direction(&b, 8));
    }

    #[test]
    fn sibling_and_reordered_paths_differ() {
        let root = RngStream::new(7);
        assert_ne!(root.path(&[1, 2]), root.path(&[2, 1]));
        assert_ne!(root.path(&[1, 2]), root.path(&[1, 3]));
        assert_ne!(root.path(&[0]), root);
        assert_ne!(RngStream::new(8).path(&[1]), root.path(&[1]));
    }

    #[test]
    fn coordinate_means_and_chi_square_mean() {
        let n = 6;
        let draws = 100_000;
        let root = RngStream::new(11);
        let mut sum = vec![0.0; n];
        let mut sq = Vec::with_capacity(draws);
        for i in 0..draws {
            let u = gaussian_direction(&root.derive(i as u64), n);
            for (s, v) in sum.iter_mut().zip(&u) {
                *s += v;
            }
            sq.push(u.iter().map(|v| v * v).sum::<f64>());
        }
        // coordinate variance is 1, so the standard error of each mean is 1/sqrt(draws)
        let se = 1.0 / (draws as f64).sqrt();
        for s in sum {
            assert!((s / draws as f64).abs() <= 4.0 * se);
        }
        let mean = sq.iter().sum::<f64>() / draws as f64;
        let var = sq.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        assert!((mean - n as f64).abs() <= 4.0 * (var / draws as f64).sqrt());
    }
}
