//! Block decomposition of decision vectors.
//!
//! A [`BlockLayout`] splits `R^n` into `b` contiguous index ranges. The
//! selector `U_s` of the block product is realized by [`BlockLayout::embed`]
//! and its transpose by [`BlockLayout::view`].

use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockLayout {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    n: usize,
}

impl BlockLayout {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Config("a block layout needs at least one block".into()));
        }
        if let Some(s) = sizes.iter().position(|&k| k == 0) {
            return Err(Error::Config(format!("block {s} has size zero")));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut n = 0;
        for &k in &sizes {
            offsets.push(n);
            n += k;
        }
        Ok(Self { sizes, offsets, n })
    }

    /// `blocks` nearly equal contiguous blocks; the first `n % blocks` get one extra coordinate.
    pub fn uniform(n: usize, blocks: usize) -> Result<Self> {
        if blocks == 0 || blocks > n {
            return Err(Error::Config(format!("cannot split dimension {n} into {blocks} nonempty blocks")));
        }
        let base = n / blocks;
        let extra = n % blocks;
        Self::new((0..blocks).map(|s| base + usize::from(s < extra)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn block_size(&self, s: usize) -> Result<usize> {
        self.check_block(s)?;
        Ok(self.sizes[s])
    }

    pub fn range(&self, s: usize) -> Result<Range<usize>> {
        self.check_block(s)?;
        Ok(self.offsets[s]..self.offsets[s] + self.sizes[s])
    }

    /// Block `s` of `x` (`U_s^T x`).
    pub fn view<'a>(&self, x: &'a [f64], s: usize) -> Result<&'a [f64]> {
        self.check_len(x)?;
        Ok(&x[self.range(s)?])
    }

    pub fn view_mut<'a>(&self, x: &'a mut [f64], s: usize) -> Result<&'a mut [f64]> {
        self.check_len(x)?;
        let r = self.range(s)?;
        Ok(&mut x[r])
    }

    /// Full vector with block `s` equal to `g` and zeros elsewhere (`U_s g`).
    pub fn embed(&self, g: &[f64], s: usize) -> Result<Vec<f64>> {
        let r = self.range(s)?;
        if g.len() != r.len() {
            return Err(Error::Dimension { expected: r.len(), got: g.len() });
        }
        let mut out = vec![0.0; self.n];
        out[r].copy_from_slice(g);
        Ok(out)
    }

    /// Euclidean norm of block `s`.
    pub fn block_norm(&self, x: &[f64], s: usize) -> Result<f64> {
        Ok(norm(self.view(x, s)?))
    }

    /// Concatenate per-block vectors back into a full vector.
    pub fn gather(&self, blocks: &[Vec<f64>]) -> Result<Vec<f64>> {
        if blocks.len() != self.num_blocks() {
            return Err(Error::Dimension { expected: self.num_blocks(), got: blocks.len() });
        }
        let mut out = Vec::with_capacity(self.n);
        for (s, b) in blocks.iter().enumerate() {
            if b.len() != self.sizes[s] {
                return Err(Error::Dimension { expected: self.sizes[s], got: b.len() });
            }
            out.extend_from_slice(b);
        }
        Ok(out)
    }

    pub fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: x.len() });
        }
        Ok(())
    }

    fn check_block(&self, s: usize) -> Result<()> {
        if s >= self.sizes.len() {
            return Err(Error::BlockIndex { index: s, blocks: self.sizes.len() });
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for BlockLayout {
    type Error = Error;

    fn try_from(sizes: Vec<usize>) -> Result<Self> {
        Self::new(sizes)
    }
}

impl From<BlockLayout> for Vec<usize> {
    fn from(layout: BlockLayout) -> Self {
        layout.sizes
    }
}

/// A decision vector tied to its block layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    data: Vec<f64>,
    layout: Arc<BlockLayout>,
}

impl BlockVector {
    pub fn new(data: Vec<f64>, layout: Arc<BlockLayout>) -> Result<Self> {
        layout.check_len(&data)?;
        Ok(Self { data, layout })
    }

    pub fn zeros(layout: Arc<BlockLayout>) -> Self {
        Self { data: vec![0.0; layout.dim()], layout }
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.data
    }

    pub fn block(&self, s: usize) -> Result<&[f64]> {
        self.layout.view(&self.data, s)
    }

    pub fn block_mut(&mut self, s: usize) -> Result<&mut [f64]> {
        self.layout.view_mut(&mut self.data, s)
    }

    pub fn block_norm(&self, s: usize) -> Result<f64> {
        self.layout.block_norm(&self.data, s)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn view_examples() {
        let l = BlockLayout::new(vec![2, 2]).unwrap();
        assert_eq!(l.view(&[1.0, 2.0, 3.0, 4.0], 1).unwrap(), &[3.0, 4.0]);
        let l = BlockLayout::new(vec![4]).unwrap();
        assert_eq!(l.view(&[1.0, 2.0, 3.0, 4.0], 0).unwrap(), &[1.0, 2.0, 3.0, 4.0]);
        let l = BlockLayout::new(vec![1, 3]).unwrap();
        assert_eq!(l.view(&[5.0, 0.0, 0.0, 0.0], 1).unwrap(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn embed_examples() {
        let l = BlockLayout::new(vec![2, 2]).unwrap();
        assert_eq!(l.embed(&[7.0, 8.0], 0).unwrap(), vec![7.0, 8.0, 0.0, 0.0]);
        assert_eq!(l.embed(&[0.0, 0.0], 1).unwrap(), vec![0.0; 4]);
        assert_eq!(l.embed(&[1.0], 0).unwrap_err(), Error::Dimension { expected: 2, got: 1 });
    }

    #[test]
    fn block_norm_examples() {
        let l = BlockLayout::new(vec![2, 2]).unwrap();
        let x = [3.0, 4.0, 0.0, 0.0];
        assert_eq!(l.block_norm(&x, 0).unwrap(), 5.0);
        assert_eq!(l.block_norm(&x, 1).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_layouts_and_indices() {
        assert!(BlockLayout::new(vec![]).is_err());
        assert!(BlockLayout::new(vec![2, 0]).is_err());
        assert!(BlockLayout::uniform(3, 4).is_err());
        let l = BlockLayout::new(vec![2, 2]).unwrap();
        assert_eq!(l.view(&[0.0; 4], 2).unwrap_err(), Error::BlockIndex { index: 2, blocks: 2 });
        assert!(l.view(&[0.0; 3], 0).is_err());
        assert!(BlockVector::new(vec![0.0; 5], Arc::new(l)).is_err());
    }

    #[test]
    fn uniform_split_and_offsets() {
        let l = BlockLayout::uniform(10, 3).unwrap();
        assert_eq!(l.sizes(), &[4, 3, 3]);
        assert_eq!(l.offsets(), &[0, 4, 7]);
        assert_eq!(l.dim(), 10);
    }

    fn layout_and_vector() -> impl Strategy<Value = (BlockLayout, Vec<f64>)> {
        prop::collection::vec(1usize..6, 1..6).prop_flat_map(|sizes| {
            let n: usize = sizes.iter().sum();
            (Just(BlockLayout::new(sizes).unwrap()), prop::collection::vec(-1e3f64..1e3, n))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn gather_of_views_reconstructs((l, x) in layout_and_vector()) {
            let parts: Vec<Vec<f64>> =
                (0..l.num_blocks()).map(|s| l.view(&x, s).unwrap().to_vec()).collect();
            prop_assert_eq!(l.gather(&parts).unwrap(), x);
        }

        #[test]
        fn embed_then_view_is_identity((l, x) in layout_and_vector(), pick in 0usize..64) {
            let s = pick % l.num_blocks();
            let g = l.view(&x, s).unwrap().to_vec();
            let e = l.embed(&g, s).unwrap();
            prop_assert_eq!(l.view(&e, s).unwrap(), &g[..]);
            for t in (0..l.num_blocks()).filter(|&t| t != s) {
                prop_assert!(l.view(&e, t).unwrap().iter().all(|&v| v == 0.0));
            }
        }

        #[test]
        fn block_norms_are_pythagorean((l, x) in layout_and_vector()) {
            let total = norm_sq(&x);
            let sum: f64 = (0..l.num_blocks()).map(|s| l.block_norm(&x, s).unwrap().powi(2)).sum();
            prop_assert!((total - sum).abs() <= 1e-12 * total.max(1e-300));
        }
    }
}
