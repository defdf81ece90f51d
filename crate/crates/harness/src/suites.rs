//! Canned workloads behind the `estimator-bench`, `concentration` and
//! `lb-demo` subcommands.

use adarucb_core::distributions::{make_lb_instance, rho, BanditInstance, LowerBoundInstance};
use adarucb_core::engine::PolicySpec;
use adarucb_core::estimator::{residual, solve_for_target, SolverKind};
use adarucb_core::rng::stream;
use adarucb_core::verification::{
    bisection_oracle, check_concentration, check_threshold_bound, check_ucb_validity, random_solver_case,
    CoverageReport,
};
use adarucb_core::DEFAULT_THRESHOLD_C;

use crate::config::Parallelism;
use crate::error::Result;
use crate::experiment::{describe, run_replications};

/// Worst-case figures of the exact and doubling solvers over a random corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverBench {
    pub cases: usize,
    pub max_abs_residual: f64,
    /// Largest `|bisection - exact| / exact`.
    pub max_rel_bisection_gap: f64,
    /// Cases where the doubling start `eta` lies at or below the root.
    pub doubling_cases: usize,
    pub min_doubling_ratio: f64,
    pub max_doubling_ratio: f64,
}

impl SolverBench {
    pub fn exact_ok(&self) -> bool {
        self.max_abs_residual <= 1e-9 && self.max_rel_bisection_gap <= 1e-9
    }

    pub fn doubling_ok(&self) -> bool {
        self.min_doubling_ratio >= 1.0 && self.max_doubling_ratio <= 2.0
    }
}

pub fn solver_bench(cases: usize, seed: u64, eta: f64) -> Result<SolverBench> {
    let mut rng = stream(seed);
    let mut out = SolverBench {
        cases,
        max_abs_residual: 0.0,
        max_rel_bisection_gap: 0.0,
        doubling_cases: 0,
        min_doubling_ratio: f64::INFINITY,
        max_doubling_ratio: f64::NEG_INFINITY,
    };
    for _ in 0..cases {
        let (xs, target) = random_solver_case(&mut rng);
        let m = solve_for_target(&xs, target, SolverKind::ExactSegmentScan, eta)
            .m_hat
            .expect("corpus targets admit a root");
        out.max_abs_residual = out.max_abs_residual.max(residual(&xs, m, target)?.abs());
        let b = bisection_oracle(&xs, target, m * 1e-3, m * 1e3, 1e-13)?;
        out.max_rel_bisection_gap = out.max_rel_bisection_gap.max(((b - m) / m).abs());
        if eta <= m {
            let x = solve_for_target(&xs, target, SolverKind::Doubling, eta)
                .m_hat
                .expect("same existence condition");
            let ratio = x / m;
            out.doubling_cases += 1;
            out.min_doubling_ratio = out.min_doubling_ratio.min(ratio);
            out.max_doubling_ratio = out.max_doubling_ratio.max(ratio);
        }
    }
    Ok(out)
}

/// The three coverage checks at their default parameter sets:
/// threshold bound on the two-point law (ε=1, u=1, Δ=0.5) with s=500,
/// concentration on the two-point law (ε=0.5, u=1, Δ=0.5) with s=400,
/// and the one-sided UCB on ρ_Δ (ε=1, u=1, Δ=0.3) with s=200; δ=0.05 throughout.
pub fn coverage_suite(trials: u64, seed: u64) -> Result<Vec<(String, CoverageReport)>> {
    let two_point = |epsilon: f64| -> Result<BanditInstance> {
        Ok(make_lb_instance(LowerBoundInstance::UAdaptiveBase {
            epsilon,
            u: 1.0,
            gap: 0.5,
        })?)
    };
    let nu_1 = two_point(1.0)?;
    let nu_half = two_point(0.5)?;
    let rho_dist = rho(1.0, 1.0, 0.3, 0.3)?;
    Ok(vec![
        (
            "threshold_bound".to_string(),
            check_threshold_bound(nu_1.arm(1), nu_1.params(), 500, 0.05, DEFAULT_THRESHOLD_C, trials, seed)?,
        ),
        (
            "concentration".to_string(),
            check_concentration(nu_half.arm(1), nu_half.params(), 400, 0.05, trials, seed)?,
        ),
        (
            "ucb_validity".to_string(),
            check_ucb_validity(&rho_dist, 200, 0.05, trials, seed)?,
        ),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoRow {
    pub pair: &'static str,
    pub instance: &'static str,
    pub policy: &'static str,
    pub horizon: u64,
    pub mean_regret: f64,
    pub stderr: f64,
}

/// Base/alternative instance pairs of the lower-bound constructions.
pub fn demo_pairs() -> Result<Vec<(&'static str, &'static str, BanditInstance)>> {
    let build = |which| -> Result<BanditInstance> { Ok(make_lb_instance(which)?) };
    Ok(vec![
        (
            "u-adaptive",
            "base",
            build(LowerBoundInstance::UAdaptiveBase {
                epsilon: 1.0,
                u: 1.0,
                gap: 0.2,
            })?,
        ),
        (
            "u-adaptive",
            "alt",
            build(LowerBoundInstance::UAdaptiveAlt {
                epsilon: 1.0,
                u: 1.0,
                u_alt: 4.0,
                gap: 0.2,
            })?,
        ),
        (
            "eps-adaptive",
            "base",
            build(LowerBoundInstance::EpsAdaptiveBase { epsilon: 1.0, gap: 0.2 })?,
        ),
        (
            "eps-adaptive",
            "alt",
            build(LowerBoundInstance::EpsAdaptiveAlt {
                epsilon: 1.0,
                epsilon_alt: 0.5,
                gap: 0.2,
            })?,
        ),
        (
            "assumption-lb",
            "base",
            build(LowerBoundInstance::AssumptionLb {
                arms: 2,
                epsilon: 1.0,
                u: 1.0,
                gap: 0.3,
                alt_arm: None,
            })?,
        ),
        (
            "assumption-lb",
            "alt",
            build(LowerBoundInstance::AssumptionLb {
                arms: 2,
                epsilon: 1.0,
                u: 1.0,
                gap: 0.3,
                alt_arm: Some(1),
            })?,
        ),
    ])
}

/// Runs `policy` on every demo instance. The trimmed-mean baseline is tuned
/// to the base instance of each pair, so on the alternative it runs with
/// misspecified `(ε, u)`.
pub fn lb_demo(
    policy: PolicySpec,
    horizon: u64,
    replications: u64,
    seed: u64,
    parallelism: Parallelism,
) -> Result<Vec<DemoRow>> {
    let pairs = demo_pairs()?;
    let mut rows = Vec::with_capacity(pairs.len());
    let mut base_params = None;
    for (pair, which, instance) in &pairs {
        if *which == "base" {
            base_params = Some(instance.params());
        }
        let spec = match policy {
            PolicySpec::RobustUcbTm { params: None, schedule } => PolicySpec::RobustUcbTm {
                params: base_params,
                schedule,
            },
            other => other,
        };
        let traces = run_replications(instance, spec, horizon, &[horizon], replications, seed, parallelism)?;
        let finals: Vec<f64> = traces.iter().map(|t| t.final_regret).collect();
        let (mean_regret, stderr, _, _) = describe(&finals);
        rows.push(DemoRow {
            pair,
            instance: which,
            policy: spec.name(),
            horizon,
            mean_regret,
            stderr,
        });
    }
    Ok(rows)
}
