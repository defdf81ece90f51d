use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adarucb_core::engine::{theorem_bound_instance_dependent, theorem_bound_worst_case, PolicySpec};
use adarucb_core::policies::{AdaRUcbConfig, DeltaSchedule};
use adarucb_harness::config::{load_config, resolve_output_dir, Parallelism, OUT_DIR_ENV};
use adarucb_harness::output::{csv_writer, fmt_float, write_coverage, write_file};
use adarucb_harness::suites::{coverage_suite, lb_demo, solver_bench};
use adarucb_harness::{run_experiment, HarnessError, Result};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "adarucb", version, about = "Heavy-tailed bandit experiments with data-driven trimmed means")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Master seed (overrides the config's master_seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; beats ADARUCB_OUT_DIR and the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, or "auto".
    #[arg(long, global = true, value_parser = parse_parallelism)]
    parallelism: Option<Parallelism>,
    /// Only report errors.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment config and write trace and summary CSVs.
    Simulate { config: PathBuf },
    /// Check the threshold solvers against bisection on a random corpus.
    EstimatorBench {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 1e-16)]
        eta: f64,
    },
    /// Run the Monte Carlo coverage checks.
    Concentration {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Regret of one policy on the lower-bound instance pairs.
    LbDemo {
        #[arg(long, value_enum, default_value_t = DemoPolicy::Adarucb)]
        policy: DemoPolicy,
        #[arg(long, default_value_t = 20_000)]
        horizon: u64,
        #[arg(long, default_value_t = 10)]
        replications: u64,
    },
    /// Print the regret bounds for every horizon of a config.
    Bounds { config: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DemoPolicy {
    Adarucb,
    RobustucbTm,
    Uniform,
}

fn parse_parallelism(text: &str) -> std::result::Result<Parallelism, String> {
    Parallelism::parse(text).ok_or_else(|| format!("expected \"auto\" or a positive integer, got \"{text}\""))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            if cli.quiet {
                eprintln!("error: {e}");
            }
            match e.exit_code() {
                1 => ExitCode::from(EXIT_CONFIG),
                _ => ExitCode::from(EXIT_RUNTIME),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let seed = cli.seed.unwrap_or(0);
    let parallelism = cli.parallelism.unwrap_or_default();
    match &cli.command {
        Command::Simulate { config } => {
            let mut cfg = load_config(config)?;
            cfg.output_dir = resolve_output_dir(cli.out.clone(), std::env::var(OUT_DIR_ENV).ok(), &cfg);
            if let Some(s) = cli.seed {
                cfg.master_seed = s;
            }
            if let Some(p) = cli.parallelism {
                cfg.parallelism = p;
            }
            let out = run_experiment(&cfg)?;
            if !cli.quiet {
                println!("{}", out.summary_path.display());
                println!("{}", out.trace_path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { config } => {
            let cfg = load_config(config)?;
            let mut w = csv_writer(io::stdout().lock());
            w.write_record(["experiment", "horizon", "bound_id", "bound_wc"])?;
            for &h in &cfg.horizons {
                w.write_record([
                    cfg.name.as_str(),
                    &h.to_string(),
                    &fmt_float(theorem_bound_instance_dependent(&cfg.instance, h)),
                    &fmt_float(theorem_bound_worst_case(&cfg.instance, h)),
                ])?;
            }
            w.flush().map_err(csv::Error::from)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EstimatorBench { cases, eta } => {
            let b = solver_bench(*cases, seed, *eta)?;
            let ok = b.exact_ok() && b.doubling_ok();
            emit(cli.out.as_deref(), "estimator_bench.csv", |w| {
                let mut w = csv_writer(w);
                w.write_record([
                    "cases",
                    "max_abs_residual",
                    "max_rel_bisection_gap",
                    "doubling_cases",
                    "min_doubling_ratio",
                    "max_doubling_ratio",
                    "pass",
                ])?;
                w.write_record([
                    b.cases.to_string(),
                    fmt_float(b.max_abs_residual),
                    fmt_float(b.max_rel_bisection_gap),
                    b.doubling_cases.to_string(),
                    fmt_float(b.min_doubling_ratio),
                    fmt_float(b.max_doubling_ratio),
                    ok.to_string(),
                ])?;
                w.flush().map_err(csv::Error::from)?;
                Ok(())
            })?;
            Ok(verdict(ok))
        }
        Command::Concentration { trials } => {
            let rows = coverage_suite(*trials, seed)?;
            let ok = rows.iter().all(|(_, r)| r.pass);
            emit(cli.out.as_deref(), "concentration.csv", |w| write_coverage(w, &rows))?;
            Ok(verdict(ok))
        }
        Command::LbDemo {
            policy,
            horizon,
            replications,
        } => {
            let spec = match policy {
                DemoPolicy::Adarucb => PolicySpec::AdaRUcb(AdaRUcbConfig::default()),
                DemoPolicy::RobustucbTm => PolicySpec::RobustUcbTm {
                    params: None,
                    schedule: DeltaSchedule::InverseSquare,
                },
                DemoPolicy::Uniform => PolicySpec::Uniform,
            };
            let horizon = if spec.is_paired() { horizon - horizon % 2 } else { *horizon };
            if horizon == 0 || *replications == 0 {
                return Err(HarnessError::Field {
                    field: "lb-demo".into(),
                    message: "horizon and replications must be positive".into(),
                });
            }
            let rows = lb_demo(spec, horizon, *replications, seed, parallelism)?;
            emit(cli.out.as_deref(), "lb_demo.csv", |w| {
                let mut w = csv_writer(w);
                w.write_record(["pair", "instance", "policy", "horizon", "mean_regret", "stderr"])?;
                for r in &rows {
                    w.write_record([
                        r.pair,
                        r.instance,
                        r.policy,
                        &r.horizon.to_string(),
                        &fmt_float(r.mean_regret),
                        &fmt_float(r.stderr),
                    ])?;
                }
                w.flush().map_err(csv::Error::from)?;
                Ok(())
            })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Writes to `<out>/<file>` when an output directory was given, else stdout.
fn emit<F>(out: Option<&Path>, file: &str, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(dir) => write_file(&dir.join(file), |w| write(w)),
        None => {
            let mut stdout = io::stdout().lock();
            write(&mut stdout)
        }
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        log::error!("acceptance check failed");
        ExitCode::from(EXIT_ACCEPTANCE)
    }
}
