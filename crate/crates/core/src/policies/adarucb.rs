use alloc::vec;
use alloc::vec::Vec;

use libm::log;

use super::{ArmSnapshot, ArmState, Policy, PolicyDecision};
use crate::estimator::{empirical_width, ThresholdConfig};
use crate::rng::RngCore;
use crate::{Error, Result, DEFAULT_THRESHOLD_C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaRUcbConfig {
    pub threshold: ThresholdConfig,
    /// An arm is forced while its threshold book holds at most
    /// `guard_c · ln τ³` nonzero samples.
    pub guard_c: f64,
}

impl Default for AdaRUcbConfig {
    fn default() -> Self {
        Self {
            threshold: ThresholdConfig::default(),
            guard_c: DEFAULT_THRESHOLD_C,
        }
    }
}

impl AdaRUcbConfig {
    /// `guard_c` must be at least `threshold.c` so every threshold solve the
    /// guard lets through has a root.
    pub fn new(threshold: ThresholdConfig, guard_c: f64) -> Result<Self> {
        if !(guard_c >= threshold.c) || !guard_c.is_finite() {
            return Err(Error::domain(
                "guard_c",
                "be finite and >= the threshold constant c",
                guard_c,
            ));
        }
        Ok(Self { threshold, guard_c })
    }
}

/// Computes every arm's optimistic index for round `tau >= 1` and picks the
/// largest (lowest index on ties).
///
/// With `L = ln τ³`, an arm is forced (`+inf`) when it was never pulled or
/// `nonzero_count <= guard_c · L`. Otherwise the threshold is solved from
/// `book_x_prime` with target `c · L`, the trimmed mean and variance come from
/// `book_x`, and the index is `μ̂ + √(2 V L / N) + 10 M̂ L / N`.
pub fn adarucb_round(states: &mut [ArmState], tau: u64, cfg: &AdaRUcbConfig) -> PolicyDecision {
    assert!(tau >= 1, "rounds start at 1");
    let l = 3.0 * log(tau as f64);
    let target = cfg.threshold.c * l;
    let indices: Vec<f64> = states
        .iter_mut()
        .map(|state| {
            state.cached = None;
            if state.pulls() == 0 || state.nonzero_count() as f64 <= cfg.guard_c * l {
                return f64::INFINITY;
            }
            let solve = state
                .book_x_prime
                .solve(target, cfg.threshold.solver, cfg.threshold.eta);
            let m_hat = solve
                .m_hat
                .expect("exploration guard admits only solvable threshold books");
            let estimate = state
                .book_x
                .estimate(m_hat)
                .expect("guard implies at least two samples");
            let index = estimate.mean_hat
                + empirical_width(estimate.variance_hat, m_hat, estimate.n as f64, l);
            state.cached = Some(ArmSnapshot {
                solve,
                estimate,
                index,
            });
            index
        })
        .collect();
    PolicyDecision::from_indices(indices)
}

pub fn adarucb_update(states: &mut [ArmState], arm: usize, reward_pair: (f64, f64)) -> Result<()> {
    let arms = states.len();
    let state = states
        .get_mut(arm)
        .ok_or(Error::ArmOutOfRange { arm, arms })?;
    state.record(reward_pair.0, reward_pair.1);
    Ok(())
}

/// AdaR-UCB: plays the optimistic arm twice per round, one reward to each
/// sample book. Construction takes no moment parameters.
#[derive(Debug, Clone)]
pub struct AdaRUcb {
    cfg: AdaRUcbConfig,
    states: Vec<ArmState>,
}

impl AdaRUcb {
    pub fn new(arms: usize, cfg: AdaRUcbConfig) -> Result<Self> {
        if arms == 0 {
            return Err(Error::NoArms);
        }
        Ok(Self {
            cfg,
            states: vec![ArmState::new(); arms],
        })
    }

    pub fn config(&self) -> &AdaRUcbConfig {
        &self.cfg
    }

    pub fn states(&self) -> &[ArmState] {
        &self.states
    }
}

impl Policy for AdaRUcb {
    fn name(&self) -> &'static str {
        "adarucb"
    }

    fn num_arms(&self) -> usize {
        self.states.len()
    }

    fn rewards_per_decision(&self) -> usize {
        2
    }

    fn decide<R: RngCore + ?Sized>(&mut self, round: u64, _rng: &mut R) -> PolicyDecision {
        adarucb_round(&mut self.states, round, &self.cfg)
    }

    fn observe(&mut self, arm: usize, rewards: &[f64]) -> Result<()> {
        match *rewards {
            [x, x_prime] => adarucb_update(&mut self.states, arm, (x, x_prime)),
            _ => Err(Error::RewardCount {
                expected: 2,
                got: rewards.len(),
            }),
        }
    }
}
