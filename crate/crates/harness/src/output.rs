//! CSV writers. Floats use 17 significant digits so values round-trip.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use adarucb_core::engine::RegretTrace;
use adarucb_core::verification::CoverageReport;

use crate::error::{HarnessError, Result};
use crate::experiment::SummaryRow;

pub const TRACE_HEADER: [&str; 5] = ["experiment", "replication", "seed", "t", "cumulative_regret"];

pub const SUMMARY_HEADER: [&str; 9] = [
    "experiment",
    "horizon",
    "policy",
    "mean_regret",
    "stderr",
    "min",
    "max",
    "bound_id",
    "bound_wc",
];

pub const COVERAGE_HEADER: [&str; 9] = [
    "check",
    "trials",
    "skipped",
    "violations",
    "evaluated",
    "empirical_rate",
    "nominal_rate",
    "slack_sigmas",
    "pass",
];

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_writer<W: Write>(sink: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink)
}

pub fn write_traces<W: Write>(sink: W, experiment: &str, traces: &[RegretTrace]) -> Result<()> {
    let mut w = csv_writer(sink);
    w.write_record(TRACE_HEADER)?;
    for (i, trace) in traces.iter().enumerate() {
        for &(t, regret) in &trace.checkpoints {
            w.write_record([
                experiment,
                &i.to_string(),
                &trace.seed.to_string(),
                &t.to_string(),
                &fmt_float(regret),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_summary<W: Write>(sink: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv_writer(sink);
    w.write_record(SUMMARY_HEADER)?;
    for row in rows {
        w.write_record([
            row.experiment.as_str(),
            &row.horizon.to_string(),
            row.policy.as_str(),
            &fmt_float(row.mean_regret),
            &fmt_float(row.stderr),
            &fmt_float(row.min),
            &fmt_float(row.max),
            &fmt_float(row.bound_id),
            &fmt_float(row.bound_wc),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_coverage<W: Write>(sink: W, rows: &[(String, CoverageReport)]) -> Result<()> {
    let mut w = csv_writer(sink);
    w.write_record(COVERAGE_HEADER)?;
    for (name, r) in rows {
        w.write_record([
            name.as_str(),
            &r.trials.to_string(),
            &r.skipped.to_string(),
            &r.violations.to_string(),
            &r.evaluated().to_string(),
            &fmt_float(r.empirical_rate),
            &fmt_float(r.nominal_rate),
            &fmt_float(r.slack_sigmas),
            if r.pass { "true" } else { "false" },
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Creates parent directories and hands a buffered file to `write`.
pub fn write_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut buf = BufWriter::new(file);
    write(&mut buf)?;
    buf.flush().map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 14124.521903696817, 1e-300, 0.0] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn trace_rows_use_lf() {
        let trace = RegretTrace {
            checkpoints: vec![(1, 0.0), (2, 0.5)],
            final_regret: 0.5,
            pulls_per_arm: vec![1, 1],
            seed: 7,
        };
        let mut buf = Vec::new();
        write_traces(&mut buf, "e", &[trace]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(
            text,
            "experiment,replication,seed,t,cumulative_regret\n\
             e,0,7,1,0.0000000000000000e0\n\
             e,0,7,2,5.0000000000000000e-1\n"
        );
    }
}
