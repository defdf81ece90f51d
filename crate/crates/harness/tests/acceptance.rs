//! Acceptance gate. Runs every criterion in sequence, prints one PASS/FAIL
//! line each and exits non-zero if any fails. Each criterion must also finish
//! inside its time budget.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adarucb_core::distributions::{make_lb_instance, rho, BanditInstance, LowerBoundInstance};
use adarucb_core::engine::{theorem_bound_instance_dependent, theorem_bound_worst_case, PolicySpec};
use adarucb_core::estimator::{residual, solve_for_target, SolverKind};
use adarucb_core::policies::AdaRUcbConfig;
use adarucb_core::rng::{stream, unit_f64};
use adarucb_core::verification::{
    bisection_oracle, check_concentration, check_threshold_bound, check_ucb_validity, random_solver_case,
    CoverageReport,
};
use adarucb_core::DEFAULT_THRESHOLD_C;
use adarucb_harness::config::Parallelism;
use adarucb_harness::experiment::{describe, run_replications};
use adarucb_harness::{parse_config, run_experiment};

const CORPUS_SEED: u64 = 0x5EED_0001;
const COVERAGE_SEED: u64 = 0x5EED_0002;
const REGRET_SEED: u64 = 0x5EED_0003;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn corpus(n: usize) -> Vec<(Vec<f64>, f64)> {
    let mut rng = stream(CORPUS_SEED);
    (0..n).map(|_| random_solver_case(&mut rng)).collect()
}

fn exact_root(xs: &[f64], target: f64) -> Option<f64> {
    solve_for_target(xs, target, SolverKind::ExactSegmentScan, 1e-16).m_hat
}

fn solver_exactness() -> Outcome {
    let mut worst_residual = 0.0f64;
    let mut worst_gap = 0.0f64;
    for (xs, target) in corpus(1000) {
        let Some(m) = exact_root(&xs, target) else {
            return outcome(false, "corpus case without a root".into());
        };
        worst_residual = worst_residual.max(residual(&xs, m, target).unwrap().abs());
        let b = bisection_oracle(&xs, target, m * 1e-3, m * 1e3, 1e-13).unwrap();
        worst_gap = worst_gap.max(((b - m) / m).abs());
    }
    outcome(
        worst_residual <= 1e-9 && worst_gap <= 1e-9,
        format!("max |residual| {worst_residual:.3e}, max rel gap to bisection {worst_gap:.3e}"),
    )
}

fn doubling_conformance() -> Outcome {
    let eta = 1e-16;
    let (mut lo, mut hi, mut eligible) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for (xs, target) in corpus(1000) {
        let m = exact_root(&xs, target).unwrap();
        if eta > m {
            continue;
        }
        let x = solve_for_target(&xs, target, SolverKind::Doubling, eta).m_hat.unwrap();
        eligible += 1;
        lo = lo.min(x / m);
        hi = hi.max(x / m);
    }
    outcome(
        eligible > 0 && lo >= 1.0 && hi <= 2.0,
        format!("{eligible} cases, ratio in [{lo:.6}, {hi:.6}]"),
    )
}

fn homogeneity_and_uniqueness() -> Outcome {
    let mut rng = stream(CORPUS_SEED ^ 1);
    let mut worst_scale = 0.0f64;
    let mut monotone = true;
    let mut existence = true;
    for (xs, target) in corpus(1000) {
        let m = exact_root(&xs, target).unwrap();
        let a = 10f64.powf(-3.0 + 6.0 * unit_f64(&mut rng));
        let scaled: Vec<f64> = xs.iter().map(|x| a * x).collect();
        let ma = exact_root(&scaled, target).unwrap();
        worst_scale = worst_scale.max(((ma - a * m) / (a * m)).abs());

        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let grid = m * 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
            let r = residual(&xs, grid, target).unwrap();
            monotone &= r <= prev;
            prev = r;
        }

        let n = xs.iter().filter(|&&x| x != 0.0).count() as f64;
        for t in [0.0, -1.0, n, n + 0.5, 0.5 * n, n - 1e-9 * n, target] {
            let expected = t > 0.0 && t < n;
            existence &= exact_root(&xs, t).is_some() == expected;
        }
    }
    existence &= exact_root(&[0.0; 5], 1.0).is_none();
    outcome(
        worst_scale <= 1e-12 && monotone && existence,
        format!("max rel homogeneity error {worst_scale:.3e}, monotone {monotone}, existence rule {existence}"),
    )
}

fn coverage_line(r: &CoverageReport) -> String {
    format!(
        "{} violations / {} evaluated ({} skipped), rate {:.5} vs nominal {:.3}",
        r.violations,
        r.evaluated(),
        r.skipped,
        r.empirical_rate,
        r.nominal_rate
    )
}

fn two_point(epsilon: f64) -> BanditInstance {
    make_lb_instance(LowerBoundInstance::UAdaptiveBase {
        epsilon,
        u: 1.0,
        gap: 0.5,
    })
    .unwrap()
}

fn threshold_coverage() -> Outcome {
    let inst = two_point(1.0);
    let r = check_threshold_bound(inst.arm(1), inst.params(), 500, 0.05, DEFAULT_THRESHOLD_C, 10_000, COVERAGE_SEED)
        .unwrap();
    outcome(r.pass && r.evaluated() > 0, coverage_line(&r))
}

fn concentration_coverage() -> Outcome {
    let inst = two_point(0.5);
    let r = check_concentration(inst.arm(1), inst.params(), 400, 0.05, 10_000, COVERAGE_SEED).unwrap();
    outcome(r.pass && r.evaluated() > 0, coverage_line(&r))
}

fn ucb_coverage() -> Outcome {
    let dist = rho(1.0, 1.0, 0.3, 0.3).unwrap();
    let r = check_ucb_validity(&dist, 200, 0.05, 10_000, COVERAGE_SEED).unwrap();
    outcome(r.pass && r.evaluated() > 0, coverage_line(&r))
}

fn assumption_lb(gap: f64) -> BanditInstance {
    make_lb_instance(LowerBoundInstance::AssumptionLb {
        arms: 2,
        epsilon: 1.0,
        u: 1.0,
        gap,
        alt_arm: None,
    })
    .unwrap()
}

fn adarucb() -> PolicySpec {
    PolicySpec::AdaRUcb(AdaRUcbConfig::default())
}

fn regret_conformance() -> Outcome {
    let inst = assumption_lb(0.3);
    let horizons = [25_000u64, 50_000, 100_000, 200_000];
    let traces = run_replications(&inst, adarucb(), 200_000, &horizons, 50, REGRET_SEED, Parallelism::Auto).unwrap();
    let means: Vec<f64> = horizons
        .iter()
        .map(|&h| {
            let v: Vec<f64> = traces.iter().map(|t| t.regret_at(h).unwrap()).collect();
            describe(&v).0
        })
        .collect();
    let bound = theorem_bound_instance_dependent(&inst, 200_000);
    let sublinear = means.windows(2).all(|w| w[1] - w[0] <= w[0]);
    let below = means[3] <= bound;
    outcome(
        below && sublinear,
        format!(
            "mean regret {:.1} / {:.1} / {:.1} / {:.1}, bound {bound:.2}, sublinear {sublinear}",
            means[0], means[1], means[2], means[3]
        ),
    )
}

fn worst_case_conformance() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for gap in [0.05, 0.1, 0.2, 0.4] {
        let inst = assumption_lb(gap);
        let traces = run_replications(&inst, adarucb(), 100_000, &[100_000], 20, REGRET_SEED, Parallelism::Auto).unwrap();
        let finals: Vec<f64> = traces.iter().map(|t| t.final_regret).collect();
        let mean = describe(&finals).0;
        let bound = theorem_bound_worst_case(&inst, 100_000);
        pass &= mean <= bound;
        parts.push(format!("{gap}: {mean:.1} <= {bound:.1}"));
    }
    outcome(pass, parts.join(", "))
}

/// Closed forms: expected `(mean, (1+ε)-moment, assumption holds)` per arm
/// plus the optimal arm.
struct Expected {
    name: &'static str,
    which: LowerBoundInstance,
    arms: Vec<(f64, f64, bool)>,
    optimal: usize,
}

fn instance_exactness() -> Outcome {
    let (e, u, d) = (0.5, 2.0, 0.3);
    let cases = vec![
        Expected {
            name: "u-adaptive base",
            which: LowerBoundInstance::UAdaptiveBase { epsilon: e, u, gap: d },
            arms: vec![(0.0, 0.0, true), (d, u, false)],
            optimal: 1,
        },
        Expected {
            name: "u-adaptive alt",
            which: LowerBoundInstance::UAdaptiveAlt {
                epsilon: e,
                u,
                u_alt: 3.0 * u,
                gap: d,
            },
            arms: vec![(2.0 * d, 3.0 * u, false), (d, u, false)],
            optimal: 0,
        },
        Expected {
            name: "eps-adaptive base",
            which: LowerBoundInstance::EpsAdaptiveBase { epsilon: e, gap: d },
            arms: vec![(0.0, 0.0, true), (d, 0.5, false)],
            optimal: 1,
        },
        Expected {
            name: "eps-adaptive alt",
            which: LowerBoundInstance::EpsAdaptiveAlt {
                epsilon: 1.0,
                epsilon_alt: e,
                gap: d,
            },
            arms: vec![(2.0 * d, 1.0, false), (d, 0.5, false)],
            optimal: 0,
        },
        Expected {
            name: "assumption-lb",
            which: LowerBoundInstance::AssumptionLb {
                arms: 3,
                epsilon: e,
                u,
                gap: d,
                alt_arm: None,
            },
            arms: vec![
                (-2.0 / 3.0 * d, 2.0 / 3.0 * u, true),
                (-d, u, true),
                (-d, u, true),
            ],
            optimal: 0,
        },
        Expected {
            name: "assumption-lb alt",
            which: LowerBoundInstance::AssumptionLb {
                arms: 3,
                epsilon: e,
                u,
                gap: d,
                alt_arm: Some(2),
            },
            arms: vec![
                (-2.0 / 3.0 * d, 2.0 / 3.0 * u, true),
                (-d, u, true),
                (-d / 3.0, u / 3.0, true),
            ],
            optimal: 2,
        },
    ];
    let mut failures = Vec::new();
    for case in &cases {
        let inst = make_lb_instance(case.which).unwrap();
        let order = inst.params().moment_order();
        if inst.optimal_arm() != case.optimal {
            failures.push(format!("{}: optimal arm {}", case.name, inst.optimal_arm()));
        }
        for (i, &(mean, moment, assumption)) in case.arms.iter().enumerate() {
            let dist = inst.arm(i);
            let arm_order = match case.which {
                // the unmodified arm keeps the base moment order
                LowerBoundInstance::EpsAdaptiveAlt { epsilon, .. } if i == 1 => 1.0 + epsilon,
                _ => order,
            };
            if (dist.mean() - mean).abs() > 1e-12 {
                failures.push(format!("{} arm {i}: mean {} vs {mean}", case.name, dist.mean()));
            }
            if (dist.moment(arm_order) - moment).abs() > 1e-12 {
                failures.push(format!("{} arm {i}: moment {} vs {moment}", case.name, dist.moment(arm_order)));
            }
            if dist.satisfies_truncated_nonpositivity() != assumption {
                failures.push(format!("{} arm {i}: assumption status", case.name));
            }
        }
    }
    let nu2 = two_point(1.0);
    if (nu2.arm(1).moment(2.0) - 1.0).abs() > 1e-12 {
        failures.push("two-point law moment differs from u".into());
    }
    if failures.is_empty() {
        outcome(true, format!("{} constructions match", cases.len() + 1))
    } else {
        outcome(false, failures.join("; "))
    }
}

fn determinism() -> Outcome {
    let text = r#"
name = "determinism"
horizons = [2000, 5000]
replications = 16
master_seed = 424242
checkpoints = { every = 500 }
[instance]
kind = "assumption-lb"
arms = 3
epsilon = 0.5
u = 1.0
gap = 0.4
[policy]
name = "adarucb"
"#;
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = parse_config(text).unwrap();
    let mut files = Vec::new();
    for threads in [1, 8] {
        cfg.parallelism = Parallelism::Threads(threads);
        cfg.output_dir = dir.path().join(format!("p{threads}"));
        let out = run_experiment(&cfg).unwrap();
        files.push((fs::read(out.trace_path).unwrap(), fs::read(out.summary_path).unwrap()));
    }
    let same = files[0] == files[1];
    outcome(
        same,
        format!(
            "trace {} bytes, summary {} bytes, identical {same}",
            files[0].0.len(),
            files[0].1.len()
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 root-solver exactness", Duration::from_secs(5), solver_exactness),
        ("2 doubling conformance", Duration::from_secs(5), doubling_conformance),
        ("3 homogeneity and uniqueness", Duration::from_secs(5), homogeneity_and_uniqueness),
        ("4 threshold-bound coverage", Duration::from_secs(30), threshold_coverage),
        ("5 concentration coverage", Duration::from_secs(60), concentration_coverage),
        ("6 one-sided UCB coverage", Duration::from_secs(30), ucb_coverage),
        ("7 instance-dependent regret", Duration::from_secs(600), regret_conformance),
        ("8 worst-case regret grid", Duration::from_secs(900), worst_case_conformance),
        ("9 instance exactness", Duration::from_secs(1), instance_exactness),
        ("10 determinism across pool sizes", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
