//! Replication fan-out and regret summaries.
//!
//! Every policy here is anytime (no decision depends on the horizon), so one
//! replication is run to the longest horizon and the shorter horizons are
//! read off its checkpoints.

use std::path::PathBuf;

use adarucb_core::distributions::BanditInstance;
use adarucb_core::engine::{
    run_replication, theorem_bound_instance_dependent, theorem_bound_worst_case, PolicySpec, RegretTrace,
    Replication,
};
use adarucb_core::rng::derive_seed;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Parallelism};
use crate::error::Result;
use crate::output::{write_file, write_summary, write_traces};

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: String,
    pub horizon: u64,
    pub policy: String,
    pub mean_regret: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
    pub bound_id: f64,
    pub bound_wc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub summary: Vec<SummaryRow>,
    pub traces: Vec<RegretTrace>,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Runs `replications` seeded replications of `policy` on `instance` to
/// `horizon`, on a pool of `parallelism` workers. Results are ordered by
/// replication index whatever the scheduling.
pub fn run_replications(
    instance: &BanditInstance,
    policy: PolicySpec,
    horizon: u64,
    checkpoints: &[u64],
    replications: u64,
    master_seed: u64,
    parallelism: Parallelism,
) -> Result<Vec<RegretTrace>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.threads())
        .build()?;
    let traces = pool.install(|| {
        (0..replications)
            .into_par_iter()
            .map(|i| {
                run_replication(&Replication {
                    instance,
                    policy,
                    horizon,
                    seed: derive_seed(master_seed, i),
                    checkpoints: checkpoints.to_vec(),
                })
            })
            .collect::<adarucb_core::Result<Vec<_>>>()
    })?;
    Ok(traces)
}

/// Mean, standard error (sample standard deviation over `√n`), min, max.
pub fn describe(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if values.len() > 1 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mean, stderr, min, max)
}

pub fn summarize(cfg: &ExperimentConfig, traces: &[RegretTrace]) -> Vec<SummaryRow> {
    cfg.horizons
        .iter()
        .map(|&h| {
            let finals: Vec<f64> = traces
                .iter()
                .map(|t| t.regret_at(h).expect("every horizon is a checkpoint"))
                .collect();
            let (mean_regret, stderr, min, max) = describe(&finals);
            SummaryRow {
                experiment: cfg.name.clone(),
                horizon: h,
                policy: cfg.policy.name().to_string(),
                mean_regret,
                stderr,
                min,
                max,
                bound_id: theorem_bound_instance_dependent(&cfg.instance, h),
                bound_wc: theorem_bound_worst_case(&cfg.instance, h),
            }
        })
        .collect()
}

/// Runs the experiment without touching the file system.
pub fn simulate(cfg: &ExperimentConfig) -> Result<(Vec<RegretTrace>, Vec<SummaryRow>)> {
    let traces = run_replications(
        &cfg.instance,
        cfg.policy,
        cfg.max_horizon(),
        &cfg.checkpoint_list(),
        cfg.replications,
        cfg.master_seed,
        cfg.parallelism,
    )?;
    let summary = summarize(cfg, &traces);
    Ok((traces, summary))
}

/// Runs the experiment and writes `<name>_trace.csv` and `<name>_summary.csv`
/// into `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (traces, summary) = simulate(cfg)?;
    let trace_path = cfg.output_dir.join(format!("{}_trace.csv", cfg.name));
    let summary_path = cfg.output_dir.join(format!("{}_summary.csv", cfg.name));
    write_file(&trace_path, |w| write_traces(w, &cfg.name, &traces))?;
    write_file(&summary_path, |w| write_summary(w, &summary))?;
    log::info!(
        "{}: {} replications to T = {}, wrote {}",
        cfg.name,
        cfg.replications,
        cfg.max_horizon(),
        cfg.output_dir.display()
    );
    Ok(ExperimentOutput {
        summary,
        traces,
        trace_path,
        summary_path,
    })
}
