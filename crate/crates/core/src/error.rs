use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument fell outside its admissible range.
    #[error("{name} must {constraint} (got {value})")]
    Domain {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },
    #[error("sample set is empty")]
    EmptySamples,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("atom masses must be finite, nonnegative and sum to 1 (sum = {sum})")]
    InvalidMasses { sum: f64 },
    #[error("atom values must be finite")]
    NonFiniteAtom,
    #[error("arm {arm}: (1+epsilon)-moment {moment} exceeds u = {u}")]
    MomentBound { arm: usize, moment: f64, u: f64 },
    #[error("instance needs at least one arm")]
    NoArms,
    #[error("arm index {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("bracket [{lo}, {hi}] does not straddle a sign change of the residual")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("horizon {0} must be even for a policy that pulls in pairs")]
    OddHorizon(u64),
    #[error("checkpoint schedule must be sorted and lie within [1, {horizon}]")]
    InvalidCheckpoints { horizon: u64 },
    #[error("expected {expected} rewards per pull, got {got}")]
    RewardCount { expected: usize, got: usize },
    #[error("distribution violates truncated non-positivity")]
    AssumptionViolated,
}

impl Error {
    pub(crate) fn domain(name: &'static str, constraint: &'static str, value: f64) -> Self {
        Error::Domain {
            name,
            constraint,
            value,
        }
    }
}
