//! Adaptive trimmed-mean estimation and optimistic policies for heavy-tailed
//! multi-armed bandits.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! core: reward laws with exact moments, the empirical-threshold trimmed mean,
//! the AdaR-UCB policy and its baselines, a deterministic simulation engine,
//! and Monte Carlo conformance checks. File formats, configuration and the
//! command line live in the `adarucb-harness` crate.
//!
//! Module map:
//! - [`distributions`]: Dirac-mixture reward laws and the hard-instance
//!   constructions.
//! - [`estimator`]: trimmed mean / variance, the threshold equation and its
//!   solvers, confidence widths.
//! - [`policies`]: AdaR-UCB, the trimmed-mean Robust-UCB baseline and a
//!   uniform control.
//! - [`engine`]: seeded replications, pseudo-regret traces, regret bounds.
//! - [`verification`]: coverage reports for the concentration results and
//!   solver oracles.
#![no_std]
// NaN must fail range checks, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod distributions;
pub mod engine;
mod error;
pub mod estimator;
pub mod policies;
pub mod rng;
pub mod verification;

pub use error::{Error, Result};

/// `(1 + √2)²`, the smallest threshold constant for which the empirical
/// threshold is dominated by the non-adaptive one with high probability.
pub const DEFAULT_THRESHOLD_C: f64 = 3.0 + 2.0 * core::f64::consts::SQRT_2;
