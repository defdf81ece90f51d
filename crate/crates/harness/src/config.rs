//! Experiment configuration files.
//!
//! A config is a TOML document; see the README for the grammar. Parsing is
//! strict: unknown keys anywhere are rejected.

use std::path::PathBuf;

use adarucb_core::distributions::{
    make_lb_instance, Atom, BanditInstance, HeavyTailParams, LowerBoundInstance, RewardDistribution,
};
use adarucb_core::engine::{geometric_checkpoints, PolicySpec};
use adarucb_core::estimator::{SolverKind, ThresholdConfig};
use adarucb_core::policies::{AdaRUcbConfig, DeltaSchedule};
use adarucb_core::DEFAULT_THRESHOLD_C;
use serde::Deserialize;

use crate::error::{HarnessError, Result};

/// Environment variable that overrides `output_dir`.
pub const OUT_DIR_ENV: &str = "ADARUCB_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSpec {
    UAdaptiveBase {
        epsilon: f64,
        u: f64,
        gap: f64,
    },
    UAdaptiveAlt {
        epsilon: f64,
        u: f64,
        u_alt: f64,
        gap: f64,
    },
    EpsAdaptiveBase {
        epsilon: f64,
        gap: f64,
    },
    EpsAdaptiveAlt {
        epsilon: f64,
        epsilon_alt: f64,
        gap: f64,
    },
    AssumptionLb {
        arms: usize,
        epsilon: f64,
        u: f64,
        gap: f64,
        #[serde(default)]
        alt_arm: Option<usize>,
    },
    Explicit {
        epsilon: f64,
        u: f64,
        arms: Vec<ArmAtoms>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmAtoms {
    pub values: Vec<f64>,
    pub masses: Vec<f64>,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<BanditInstance> {
        let lb = match *self {
            InstanceSpec::UAdaptiveBase { epsilon, u, gap } => LowerBoundInstance::UAdaptiveBase { epsilon, u, gap },
            InstanceSpec::UAdaptiveAlt {
                epsilon,
                u,
                u_alt,
                gap,
            } => LowerBoundInstance::UAdaptiveAlt {
                epsilon,
                u,
                u_alt,
                gap,
            },
            InstanceSpec::EpsAdaptiveBase { epsilon, gap } => LowerBoundInstance::EpsAdaptiveBase { epsilon, gap },
            InstanceSpec::EpsAdaptiveAlt {
                epsilon,
                epsilon_alt,
                gap,
            } => LowerBoundInstance::EpsAdaptiveAlt {
                epsilon,
                epsilon_alt,
                gap,
            },
            InstanceSpec::AssumptionLb {
                arms,
                epsilon,
                u,
                gap,
                alt_arm,
            } => LowerBoundInstance::AssumptionLb {
                arms,
                epsilon,
                u,
                gap,
                alt_arm,
            },
            InstanceSpec::Explicit { epsilon, u, ref arms } => return build_explicit(epsilon, u, arms),
        };
        make_lb_instance(lb).map_err(|e| core_field("instance", e))
    }
}

fn build_explicit(epsilon: f64, u: f64, arms: &[ArmAtoms]) -> Result<BanditInstance> {
    let params = HeavyTailParams::new(epsilon, u).map_err(|e| core_field("instance", e))?;
    if arms.is_empty() {
        return Err(HarnessError::field("instance.arms", "at least one arm is required"));
    }
    let mut dists = Vec::with_capacity(arms.len());
    for (i, arm) in arms.iter().enumerate() {
        if arm.values.len() != arm.masses.len() {
            return Err(HarnessError::field(
                format!("instance.arms[{i}]"),
                format!(
                    "values and masses differ in length ({} vs {})",
                    arm.values.len(),
                    arm.masses.len()
                ),
            ));
        }
        let atoms = arm.values.iter().zip(&arm.masses).map(|(&v, &m)| Atom::new(v, m));
        let dist = RewardDistribution::from_atoms(atoms)
            .map_err(|e| HarnessError::field(format!("instance.arms[{i}]"), e.to_string()))?;
        dists.push(dist);
    }
    BanditInstance::new(dists, params).map_err(|e| core_field("instance", e))
}

/// Names the offending field when the core reports a domain error.
fn core_field(prefix: &str, err: adarucb_core::Error) -> HarnessError {
    match err {
        adarucb_core::Error::Domain { name, .. } => HarnessError::field(format!("{prefix}.{name}"), err.to_string()),
        adarucb_core::Error::MomentBound { arm, .. } => {
            HarnessError::field(format!("{prefix}.arms[{arm}]"), err.to_string())
        }
        other => HarnessError::field(prefix, other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverName {
    #[default]
    Exact,
    Doubling,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PolicyConfig {
    Adarucb {
        #[serde(default = "default_c")]
        c: f64,
        /// Defaults to `max(c, (1+√2)²)`.
        #[serde(default)]
        guard_c: Option<f64>,
        #[serde(default)]
        solver: SolverName,
        #[serde(default = "default_eta")]
        eta: f64,
    },
    RobustucbTm {
        /// Moment parameters handed to the baseline; the instance's own when
        /// both are absent.
        #[serde(default)]
        epsilon: Option<f64>,
        #[serde(default)]
        u: Option<f64>,
        /// Fixed confidence level; `δ_t = t⁻²` when absent.
        #[serde(default)]
        delta: Option<f64>,
    },
    Uniform,
}

fn default_c() -> f64 {
    DEFAULT_THRESHOLD_C
}

fn default_eta() -> f64 {
    1e-16
}

impl PolicyConfig {
    pub fn build(&self) -> Result<PolicySpec> {
        match *self {
            PolicyConfig::Adarucb { c, guard_c, solver, eta } => {
                let solver = match solver {
                    SolverName::Exact => SolverKind::ExactSegmentScan,
                    SolverName::Doubling => SolverKind::Doubling,
                };
                let threshold = ThresholdConfig::new(c, eta, solver).map_err(|e| core_field("policy", e))?;
                let guard_c = guard_c.unwrap_or(c.max(DEFAULT_THRESHOLD_C));
                let cfg = AdaRUcbConfig::new(threshold, guard_c).map_err(|e| core_field("policy", e))?;
                Ok(PolicySpec::AdaRUcb(cfg))
            }
            PolicyConfig::RobustucbTm { epsilon, u, delta } => {
                let params = match (epsilon, u) {
                    (Some(epsilon), Some(u)) => {
                        Some(HeavyTailParams::new(epsilon, u).map_err(|e| core_field("policy", e))?)
                    }
                    (None, None) => None,
                    _ => {
                        return Err(HarnessError::field(
                            "policy",
                            "epsilon and u must be given together",
                        ))
                    }
                };
                let schedule = match delta {
                    None => DeltaSchedule::InverseSquare,
                    Some(d) if d > 0.0 && d < 1.0 => DeltaSchedule::Fixed(d),
                    Some(d) => {
                        return Err(HarnessError::field(
                            "policy.delta",
                            format!("delta must lie in (0,1) (got {d})"),
                        ))
                    }
                };
                Ok(PolicySpec::RobustUcbTm { params, schedule })
            }
            PolicyConfig::Uniform => Ok(PolicySpec::Uniform),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum CheckpointSchedule {
    /// Powers of two up to the longest horizon.
    #[default]
    Geometric,
    Every(u64),
    List(Vec<u64>),
}

impl CheckpointSchedule {
    /// The schedule for `horizon`, merged with `extra` and clipped to
    /// `[1, horizon]`.
    pub fn resolve(&self, horizon: u64, extra: &[u64]) -> Vec<u64> {
        let mut out = match self {
            CheckpointSchedule::Geometric => geometric_checkpoints(horizon),
            CheckpointSchedule::Every(step) => (1..=horizon / step).map(|i| i * step).collect(),
            CheckpointSchedule::List(list) => list.clone(),
        };
        out.extend_from_slice(extra);
        out.push(horizon);
        out.retain(|&t| t >= 1 && t <= horizon);
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Auto,
    Threads(usize),
}

impl Parallelism {
    pub fn parse(text: &str) -> Option<Self> {
        if text.eq_ignore_ascii_case("auto") {
            return Some(Parallelism::Auto);
        }
        match text.parse::<usize>() {
            Ok(n) if n >= 1 => Some(Parallelism::Threads(n)),
            _ => None,
        }
    }

    /// Worker count handed to the pool; 0 lets the pool decide.
    pub fn threads(self) -> usize {
        match self {
            Parallelism::Auto => 0,
            Parallelism::Threads(n) => n,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawCheckpoints {
    Named(String),
    Every { every: u64 },
    List(Vec<u64>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawParallelism {
    Count(i64),
    Named(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    instance: InstanceSpec,
    policy: PolicyConfig,
    horizons: Vec<u64>,
    #[serde(default = "default_replications")]
    replications: u64,
    #[serde(default)]
    master_seed: u64,
    #[serde(default)]
    checkpoints: Option<RawCheckpoints>,
    #[serde(default = "default_output_dir")]
    output_dir: PathBuf,
    #[serde(default)]
    parallelism: Option<RawParallelism>,
}

fn default_replications() -> u64 {
    1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub instance_spec: InstanceSpec,
    pub instance: BanditInstance,
    pub policy_config: PolicyConfig,
    pub policy: PolicySpec,
    /// Sorted, deduplicated, even for paired policies.
    pub horizons: Vec<u64>,
    pub replications: u64,
    pub master_seed: u64,
    pub checkpoints: CheckpointSchedule,
    pub output_dir: PathBuf,
    pub parallelism: Parallelism,
    /// Adjustments made while validating (also logged).
    pub warnings: Vec<String>,
}

impl ExperimentConfig {
    pub fn max_horizon(&self) -> u64 {
        *self.horizons.last().expect("horizons validated nonempty")
    }

    /// Checkpoints recorded by each replication.
    pub fn checkpoint_list(&self) -> Vec<u64> {
        self.checkpoints.resolve(self.max_horizon(), &self.horizons)
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
    validate(raw)
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::ConfigFile {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn parse_error(text: &str, err: &toml::de::Error) -> HarnessError {
    let offset = err.span().map_or(0, |s| s.start).min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    HarnessError::Parse {
        line,
        column,
        message: err.message().to_string(),
    }
}

fn validate(raw: RawConfig) -> Result<ExperimentConfig> {
    let mut warnings = Vec::new();
    let valid_name = !raw.name.is_empty()
        && raw
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if !valid_name {
        return Err(HarnessError::field(
            "name",
            "name must be nonempty and use only ASCII letters, digits, '-', '_' or '.'",
        ));
    }
    let instance = raw.instance.build()?;
    let policy = raw.policy.build()?;
    if raw.replications == 0 {
        return Err(HarnessError::field("replications", "replications must be >= 1"));
    }
    if raw.horizons.is_empty() {
        return Err(HarnessError::field("horizons", "at least one horizon is required"));
    }
    let mut horizons = Vec::with_capacity(raw.horizons.len());
    for &h in &raw.horizons {
        let mut h = h;
        if policy.is_paired() && h % 2 == 1 {
            let msg = format!(
                "horizon {h} is odd but {} pulls in pairs; rounded down to {}",
                policy.name(),
                h - 1
            );
            log::warn!("{msg}");
            warnings.push(msg);
            h -= 1;
        }
        if h == 0 {
            return Err(HarnessError::field("horizons", "horizons must be >= 1 (>= 2 for paired policies)"));
        }
        horizons.push(h);
    }
    horizons.sort_unstable();
    horizons.dedup();

    let checkpoints = match raw.checkpoints {
        None => CheckpointSchedule::Geometric,
        Some(RawCheckpoints::Named(name)) if name == "geometric" => CheckpointSchedule::Geometric,
        Some(RawCheckpoints::Named(name)) => {
            return Err(HarnessError::field(
                "checkpoints",
                format!("unknown schedule \"{name}\" (expected \"geometric\", {{ every = n }} or a list)"),
            ))
        }
        Some(RawCheckpoints::Every { every: 0 }) => {
            return Err(HarnessError::field("checkpoints.every", "every must be >= 1"))
        }
        Some(RawCheckpoints::Every { every }) => CheckpointSchedule::Every(every),
        Some(RawCheckpoints::List(list)) => CheckpointSchedule::List(list),
    };
    let parallelism = match raw.parallelism {
        None => Parallelism::Auto,
        Some(RawParallelism::Count(n)) if n >= 1 => Parallelism::Threads(n as usize),
        Some(RawParallelism::Named(ref s)) if s == "auto" => Parallelism::Auto,
        Some(_) => {
            return Err(HarnessError::field(
                "parallelism",
                "parallelism must be \"auto\" or an integer >= 1",
            ))
        }
    };
    Ok(ExperimentConfig {
        name: raw.name,
        instance_spec: raw.instance,
        instance,
        policy_config: raw.policy,
        policy,
        horizons,
        replications: raw.replications,
        master_seed: raw.master_seed,
        checkpoints,
        output_dir: raw.output_dir,
        parallelism,
        warnings,
    })
}

/// Output directory precedence: explicit flag, then [`OUT_DIR_ENV`], then
/// the config.
pub fn resolve_output_dir(flag: Option<PathBuf>, env: Option<String>, cfg: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| cfg.output_dir.clone())
}
