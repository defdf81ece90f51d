use alloc::vec;
use alloc::vec::Vec;

use libm::log;

use super::{ArmState, Policy, PolicyDecision};
use crate::distributions::HeavyTailParams;
use crate::estimator::{moment_width, nonadaptive_threshold_log};
use crate::rng::RngCore;
use crate::{Error, Result};

/// Confidence level `δ_t` of the trimmed-mean baseline at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DeltaSchedule {
    /// `δ_t = t⁻²`
    #[default]
    InverseSquare,
    /// Constant `δ` in `(0, 1)`.
    Fixed(f64),
}

impl DeltaSchedule {
    /// `ln(1/δ_t)`
    pub fn log_inv_delta(&self, t: u64) -> f64 {
        match *self {
            DeltaSchedule::InverseSquare => 2.0 * log(t as f64),
            DeltaSchedule::Fixed(delta) => -log(delta),
        }
    }
}

/// Indices of the trimmed-mean baseline at time `t`.
///
/// Both sample books are pooled (`N = 2 · pulls`), trimmed at
/// `M̃ = (u N / L)^(1/(1+ε))`, and widened by `4 u^(1/(1+ε)) (L/N)^(ε/(1+ε))`
/// with `L = ln(1/δ_t)`. Unpulled arms get `+inf`.
pub fn robustucb_tm_round(
    states: &[ArmState],
    t: u64,
    params: HeavyTailParams,
    schedule: DeltaSchedule,
) -> PolicyDecision {
    let l = schedule.log_inv_delta(t);
    let indices: Vec<f64> = states
        .iter()
        .map(|state| {
            if state.pulls() == 0 {
                return f64::INFINITY;
            }
            let n = 2.0 * state.pulls() as f64;
            let m = nonadaptive_threshold_log(params, n, l);
            let mean = (state.book_x().trimmed_sum(m) + state.book_x_prime().trimmed_sum(m)) / n;
            mean + 4.0 * moment_width(params, n, l)
        })
        .collect();
    PolicyDecision::from_indices(indices)
}

/// Trimmed-mean Robust-UCB with known `(ε, u)`. Pulls in pairs like
/// [`super::AdaRUcb`] so both policies see the same sampling pattern; round
/// `τ` uses time `t = 2τ`.
#[derive(Debug, Clone)]
pub struct RobustUcbTm {
    params: HeavyTailParams,
    schedule: DeltaSchedule,
    states: Vec<ArmState>,
}

impl RobustUcbTm {
    pub fn new(arms: usize, params: HeavyTailParams, schedule: DeltaSchedule) -> Result<Self> {
        if arms == 0 {
            return Err(Error::NoArms);
        }
        if !(params.u() > 0.0) {
            return Err(Error::domain("u", "be > 0", params.u()));
        }
        if let DeltaSchedule::Fixed(delta) = schedule {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(Error::domain("delta", "lie in (0,1)", delta));
            }
        }
        Ok(Self {
            params,
            schedule,
            states: vec![ArmState::new(); arms],
        })
    }

    pub fn states(&self) -> &[ArmState] {
        &self.states
    }
}

impl Policy for RobustUcbTm {
    fn name(&self) -> &'static str {
        "robustucb-tm"
    }

    fn num_arms(&self) -> usize {
        self.states.len()
    }

    fn rewards_per_decision(&self) -> usize {
        2
    }

    fn decide<R: RngCore + ?Sized>(&mut self, round: u64, _rng: &mut R) -> PolicyDecision {
        robustucb_tm_round(&self.states, 2 * round, self.params, self.schedule)
    }

    fn observe(&mut self, arm: usize, rewards: &[f64]) -> Result<()> {
        let arms = self.states.len();
        let state = self
            .states
            .get_mut(arm)
            .ok_or(Error::ArmOutOfRange { arm, arms })?;
        match *rewards {
            [x, x_prime] => {
                state.record(x, x_prime);
                Ok(())
            }
            _ => Err(Error::RewardCount {
                expected: 2,
                got: rewards.len(),
            }),
        }
    }
}
