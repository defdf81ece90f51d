//! Arm-selection policies.
//!
//! [`AdaRUcb`] never sees the moment parameters `(ε, u)`; it solves for its
//! trimming threshold from data. [`RobustUcbTm`] is the non-adaptive
//! trimmed-mean baseline that is handed `(ε, u)` up front, and
//! [`UniformPolicy`] is a control.

mod adarucb;
mod robust_ucb;
mod uniform;

use alloc::vec::Vec;

pub use adarucb::{adarucb_round, adarucb_update, AdaRUcb, AdaRUcbConfig};
pub use robust_ucb::{robustucb_tm_round, DeltaSchedule, RobustUcbTm};
pub use uniform::{uniform_round, UniformPolicy};

use crate::estimator::{SampleBook, ThresholdSolve, TrimmedEstimate};
use crate::rng::RngCore;
use crate::Result;

/// Decision of one round.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDecision {
    pub arm: usize,
    /// Optimistic index per arm (`+inf` for forced arms). Empty for policies
    /// without an index.
    pub indices: Vec<f64>,
    /// The chosen arm was forced by the exploration guard.
    pub forced: bool,
}

impl PolicyDecision {
    pub(crate) fn from_indices(indices: Vec<f64>) -> Self {
        let arm = argmax_lowest(&indices);
        let forced = indices[arm] == f64::INFINITY;
        Self {
            arm,
            indices,
            forced,
        }
    }
}

/// Index of the largest value, lowest index on ties. Panics on an empty slice.
pub fn argmax_lowest(values: &[f64]) -> usize {
    assert!(!values.is_empty(), "argmax over no arms");
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// A policy driven by the simulation engine.
pub trait Policy {
    fn name(&self) -> &'static str;

    fn num_arms(&self) -> usize;

    /// Rewards drawn from the chosen arm per decision (2 for the paired
    /// policies, 1 otherwise).
    fn rewards_per_decision(&self) -> usize;

    /// `round` counts decisions starting at 1.
    fn decide<R: RngCore + ?Sized>(&mut self, round: u64, rng: &mut R) -> PolicyDecision;

    fn observe(&mut self, arm: usize, rewards: &[f64]) -> Result<()>;
}

/// Cached per-round quantities of an arm whose index was finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSnapshot {
    pub solve: ThresholdSolve,
    pub estimate: TrimmedEstimate,
    pub index: f64,
}

/// Per-arm sample books for the paired policies.
///
/// `book_x` feeds the mean and variance, `book_x_prime` the threshold. Each
/// pull pair appends one sample to each, so both always hold `pulls` samples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArmState {
    book_x: SampleBook,
    book_x_prime: SampleBook,
    cached: Option<ArmSnapshot>,
}

impl ArmState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pulls(&self) -> usize {
        self.book_x.len()
    }

    pub fn book_x(&self) -> &SampleBook {
        &self.book_x
    }

    pub fn book_x_prime(&self) -> &SampleBook {
        &self.book_x_prime
    }

    /// Nonzero entries of `book_x_prime`.
    pub fn nonzero_count(&self) -> usize {
        self.book_x_prime.nonzero_count()
    }

    pub fn cached(&self) -> Option<&ArmSnapshot> {
        self.cached.as_ref()
    }

    pub fn record(&mut self, x: f64, x_prime: f64) {
        self.book_x.push(x);
        self.book_x_prime.push(x_prime);
        self.cached = None;
    }
}
