//! Deterministic simulation of a policy on a bandit instance.
//!
//! Regret is pseudo-regret: after `t` pulls it is `Σ_{s<=t} Δ_{I_s}` with the
//! true gaps. Each replication owns two streams derived from its seed (reward
//! draws and policy randomness), so a trace is a pure function of the
//! replication.

use alloc::vec;
use alloc::vec::Vec;

use libm::{log, pow};

use crate::distributions::{BanditInstance, HeavyTailParams};
use crate::policies::{
    AdaRUcb, AdaRUcbConfig, DeltaSchedule, Policy, RobustUcbTm, UniformPolicy,
};
use crate::rng::{derive_seed, stream, POLICY_STREAM, REWARD_STREAM};
use crate::{Error, Result};

/// Policy choice plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySpec {
    AdaRUcb(AdaRUcbConfig),
    /// `params: None` hands the baseline the instance's own `(ε, u)`.
    RobustUcbTm {
        params: Option<HeavyTailParams>,
        schedule: DeltaSchedule,
    },
    Uniform,
}

impl PolicySpec {
    pub fn name(&self) -> &'static str {
        match self {
            PolicySpec::AdaRUcb(_) => "adarucb",
            PolicySpec::RobustUcbTm { .. } => "robustucb-tm",
            PolicySpec::Uniform => "uniform",
        }
    }

    /// Whether the policy draws two rewards per decision.
    pub fn is_paired(&self) -> bool {
        !matches!(self, PolicySpec::Uniform)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replication<'a> {
    pub instance: &'a BanditInstance,
    pub policy: PolicySpec,
    pub horizon: u64,
    pub seed: u64,
    /// Sorted pull counts in `[1, horizon]` at which regret is recorded.
    pub checkpoints: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub checkpoints: Vec<(u64, f64)>,
    pub final_regret: f64,
    pub pulls_per_arm: Vec<u64>,
    pub seed: u64,
}

impl RegretTrace {
    /// Regret recorded at pull count `t`, if `t` was a checkpoint.
    pub fn regret_at(&self, t: u64) -> Option<f64> {
        self.checkpoints
            .binary_search_by_key(&t, |&(c, _)| c)
            .ok()
            .map(|i| self.checkpoints[i].1)
    }
}

/// `{2^k : 2^k <= T} ∪ {T}`
pub fn geometric_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 1u64;
    while t < horizon {
        out.push(t);
        t = t.saturating_mul(2);
    }
    if horizon > 0 {
        out.push(horizon);
    }
    out
}

pub fn run_replication(rep: &Replication<'_>) -> Result<RegretTrace> {
    let k = rep.instance.num_arms();
    match rep.policy {
        PolicySpec::AdaRUcb(cfg) => run_policy(rep, AdaRUcb::new(k, cfg)?),
        PolicySpec::RobustUcbTm { params, schedule } => {
            let params = params.unwrap_or_else(|| rep.instance.params());
            run_policy(rep, RobustUcbTm::new(k, params, schedule)?)
        }
        PolicySpec::Uniform => run_policy(rep, UniformPolicy::new(k)?),
    }
}

/// Runs an arbitrary policy for `rep.horizon` pulls (`rep.policy` is ignored).
pub fn run_policy<P: Policy>(rep: &Replication<'_>, mut policy: P) -> Result<RegretTrace> {
    let horizon = rep.horizon;
    let per_decision = policy.rewards_per_decision() as u64;
    if per_decision == 0 || !horizon.is_multiple_of(per_decision) {
        return Err(Error::OddHorizon(horizon));
    }
    if policy.num_arms() != rep.instance.num_arms() {
        return Err(Error::ArmOutOfRange {
            arm: policy.num_arms(),
            arms: rep.instance.num_arms(),
        });
    }
    let sorted = rep.checkpoints.windows(2).all(|w| w[0] < w[1]);
    let in_range = rep.checkpoints.iter().all(|&t| t >= 1 && t <= horizon);
    if !sorted || !in_range {
        return Err(Error::InvalidCheckpoints { horizon });
    }

    let gaps = rep.instance.gaps();
    let mut reward_rng = stream(derive_seed(rep.seed, REWARD_STREAM));
    let mut policy_rng = stream(derive_seed(rep.seed, POLICY_STREAM));
    let mut pulls_per_arm = vec![0u64; gaps.len()];
    let mut checkpoints = Vec::with_capacity(rep.checkpoints.len());
    let mut next_checkpoint = rep.checkpoints.iter().copied().peekable();
    let mut rewards = [0.0f64; 2];
    let mut regret = 0.0;
    let mut t = 0u64;
    let mut round = 1u64;
    while t < horizon {
        let arm = policy.decide(round, &mut policy_rng).arm;
        let dist = rep.instance.arm(arm);
        for slot in rewards.iter_mut().take(per_decision as usize) {
            *slot = dist.sample(&mut reward_rng);
            t += 1;
            regret += gaps[arm];
            pulls_per_arm[arm] += 1;
            if next_checkpoint.peek() == Some(&t) {
                checkpoints.push((t, regret));
                next_checkpoint.next();
            }
        }
        policy.observe(arm, &rewards[..per_decision as usize])?;
        round += 1;
    }
    Ok(RegretTrace {
        checkpoints,
        final_regret: regret,
        pulls_per_arm,
        seed: rep.seed,
    })
}

/// Instance-dependent regret bound of AdaR-UCB:
/// `Σ_{Δ_i>0} [(120 (u/Δ_i)^(1/ε) + 24 Δ_i / P_i(X≠0)) ln(T/2) + 20 Δ_i]`.
/// `+inf` when a suboptimal arm never yields a nonzero reward.
pub fn theorem_bound_instance_dependent(instance: &BanditInstance, horizon: u64) -> f64 {
    let params = instance.params();
    let log_half = log(horizon as f64 / 2.0);
    suboptimal_arms(instance)
        .map(|(gap, p_nonzero)| {
            let moment_term = 120.0 * pow(params.u() / gap, 1.0 / params.epsilon());
            (moment_term + 24.0 * gap / p_nonzero) * log_half + 20.0 * gap
        })
        .sum()
}

/// Worst-case regret bound of AdaR-UCB:
/// `46 (K ln(T/2))^(ε/(1+ε)) (u T)^(1/(1+ε)) + Σ_{Δ_i>0} (24 Δ_i / P_i(X≠0) ln(T/2) + 20 Δ_i)`.
pub fn theorem_bound_worst_case(instance: &BanditInstance, horizon: u64) -> f64 {
    let params = instance.params();
    let order = params.moment_order();
    let log_half = log(horizon as f64 / 2.0);
    let k = instance.num_arms() as f64;
    let leading = 46.0
        * pow(k * log_half, params.epsilon() / order)
        * pow(params.u() * horizon as f64, 1.0 / order);
    let forced: f64 = suboptimal_arms(instance)
        .map(|(gap, p_nonzero)| 24.0 * gap / p_nonzero * log_half + 20.0 * gap)
        .sum();
    leading + forced
}

fn suboptimal_arms(instance: &BanditInstance) -> impl Iterator<Item = (f64, f64)> + '_ {
    instance
        .gaps()
        .iter()
        .zip(instance.arms())
        .filter(|(&gap, _)| gap > 0.0)
        .map(|(&gap, dist)| match dist.nonzero_mass() {
            p if p > 0.0 => (gap, p),
            _ => (gap, 0.0),
        })
}
