//! Zeroth-order stochastic block coordinate methods.
//!
//! The solvers see only a noisy function-value oracle. Each iteration draws a
//! block, averages Gaussian-smoothing difference quotients restricted to that
//! block, and applies a gradient step, a Bregman prox, a linear minimization
//! or an inexact conditional-gradient prox to it.
//!
//! ```
//! use std::sync::Arc;
//! use zsbc::block::BlockLayout;
//! use zsbc::oracle::{FnObjective, NoiseModel, Objective, SmoothedOracle};
//! use zsbc::rng::RngStream;
//!
//! let f: Arc<dyn Objective> = Arc::new(FnObjective::new(2, |x: &[f64]| x[0]));
//! let layout = Arc::new(BlockLayout::new(vec![1, 1]).unwrap());
//! let oracle = SmoothedOracle::new(f, NoiseModel::Noiseless, 0.1, layout).unwrap();
//! let g = oracle.gsmooth_estimate(&[0.0, 0.0], &RngStream::new(1)).unwrap();
//! assert_eq!(oracle.calls(), 2);
//! assert_eq!(g.len(), 2);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod block;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod problems;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
