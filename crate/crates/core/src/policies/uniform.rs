use alloc::vec::Vec;

use rand::Rng;

use super::{Policy, PolicyDecision};
use crate::rng::RngCore;
use crate::{Error, Result};

/// Uniformly random arm. Panics when `arms == 0`.
pub fn uniform_round<R: RngCore + ?Sized>(arms: usize, rng: &mut R) -> PolicyDecision {
    assert!(arms >= 1, "uniform policy needs at least one arm");
    PolicyDecision {
        arm: rng.gen_range(0..arms as u64) as usize,
        indices: Vec::new(),
        forced: false,
    }
}

/// Control policy: one reward per decision, arm drawn uniformly.
#[derive(Debug, Clone)]
pub struct UniformPolicy {
    arms: usize,
}

impl UniformPolicy {
    pub fn new(arms: usize) -> Result<Self> {
        if arms == 0 {
            return Err(Error::NoArms);
        }
        Ok(Self { arms })
    }
}

impl Policy for UniformPolicy {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn num_arms(&self) -> usize {
        self.arms
    }

    fn rewards_per_decision(&self) -> usize {
        1
    }

    fn decide<R: RngCore + ?Sized>(&mut self, _round: u64, rng: &mut R) -> PolicyDecision {
        uniform_round(self.arms, rng)
    }

    fn observe(&mut self, arm: usize, rewards: &[f64]) -> Result<()> {
        if arm >= self.arms {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.arms,
            });
        }
        if rewards.len() != 1 {
            return Err(Error::RewardCount {
                expected: 1,
                got: rewards.len(),
            });
        }
        Ok(())
    }
}
