//! Monte Carlo conformance checks for the estimator and an independent root
//! oracle for the threshold solver.
//!
//! The concentration results bound failure probabilities from above, so a
//! check passes when the empirical violation rate stays below the nominal
//! rate plus `slack_sigmas` binomial standard deviations. Trials where the
//! threshold root does not exist are reported as skipped and excluded from
//! the rate.

use alloc::vec::Vec;

use libm::{pow, sqrt};

use crate::distributions::{HeavyTailParams, RewardDistribution};
use crate::estimator::{
    empirical_width, log_inv_delta, moment_width, residual, SampleBook, SolverKind,
};
use crate::rng::{derive_seed, stream, unit_f64, RngCore, Stream};
use crate::{Error, Result, DEFAULT_THRESHOLD_C};

/// Default binomial slack used by the checks.
pub const DEFAULT_SLACK_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    /// Trials attempted.
    pub trials: u64,
    /// Trials without a threshold root, left out of the rate.
    pub skipped: u64,
    pub violations: u64,
    pub empirical_rate: f64,
    pub nominal_rate: f64,
    pub slack_sigmas: f64,
    pub pass: bool,
}

impl CoverageReport {
    pub fn evaluated(&self) -> u64 {
        self.trials - self.skipped
    }

    /// `nominal + slack_sigmas · √(nominal (1 - nominal) / evaluated)`; a
    /// report with no evaluated trial passes vacuously.
    pub fn from_counts(trials: u64, skipped: u64, violations: u64, nominal_rate: f64, slack_sigmas: f64) -> Self {
        let evaluated = trials - skipped;
        let (empirical_rate, pass) = if evaluated == 0 {
            (0.0, true)
        } else {
            let n = evaluated as f64;
            let rate = violations as f64 / n;
            let limit = nominal_rate + slack_sigmas * sqrt(nominal_rate * (1.0 - nominal_rate) / n);
            (rate, rate <= limit)
        };
        Self {
            trials,
            skipped,
            violations,
            empirical_rate,
            nominal_rate,
            slack_sigmas,
            pass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TrialOutcome {
    Skipped,
    Held,
    Violated,
}

fn run_trials<F>(trials: u64, seed: u64, mut trial: F) -> Result<(u64, u64)>
where
    F: FnMut(&mut Stream) -> TrialOutcome,
{
    if trials == 0 {
        return Err(Error::domain("trials", "be >= 1", 0.0));
    }
    let (mut skipped, mut violations) = (0, 0);
    for i in 0..trials {
        let mut rng = stream(derive_seed(seed, i));
        match trial(&mut rng) {
            TrialOutcome::Skipped => skipped += 1,
            TrialOutcome::Violated => violations += 1,
            TrialOutcome::Held => {}
        }
    }
    Ok((skipped, violations))
}

fn draw_book(dist: &RewardDistribution, n: usize, rng: &mut Stream) -> SampleBook {
    (0..n).map(|_| dist.sample(rng)).collect()
}

/// Frequency of `M̂ > (u s / ((√c - √2)² ln(1/δ)))^(1/(1+ε))` over `trials`
/// draws of `s` samples; nominal rate `2δ`.
pub fn check_threshold_bound(
    dist: &RewardDistribution,
    params: HeavyTailParams,
    s: usize,
    delta: f64,
    c: f64,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if !(c > 2.0) {
        return Err(Error::domain("c", "be > 2", c));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::domain("delta", "lie in (0,1/2)", delta));
    }
    if s == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let l = log_inv_delta(delta)?;
    let shrink = sqrt(c) - core::f64::consts::SQRT_2;
    let bound = pow(
        params.u() * s as f64 / (shrink * shrink * l),
        1.0 / params.moment_order(),
    );
    let (skipped, violations) = run_trials(trials, seed, |rng| {
        let book = draw_book(dist, s, rng);
        match book.solve(c * l, SolverKind::ExactSegmentScan, 1e-16).m_hat {
            None => TrialOutcome::Skipped,
            Some(m) if m > bound => TrialOutcome::Violated,
            Some(_) => TrialOutcome::Held,
        }
    })?;
    Ok(CoverageReport::from_counts(
        trials,
        skipped,
        violations,
        2.0 * delta,
        DEFAULT_SLACK_SIGMAS,
    ))
}

/// Split-sample protocol: `s/2` samples fix the threshold (with
/// `c = (1+√2)²`), the other `s/2` give the trimmed mean. Violation when
/// `|μ̂ - μ| > 8 u^(1/(1+ε)) (ln(1/δ)/s)^(ε/(1+ε))`; nominal rate `4δ`.
pub fn check_concentration(
    dist: &RewardDistribution,
    params: HeavyTailParams,
    s: usize,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if s < 4 || !s.is_multiple_of(2) {
        return Err(Error::domain("s", "be even and >= 4", s as f64));
    }
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::domain("delta", "lie in (0,1/4)", delta));
    }
    let l = log_inv_delta(delta)?;
    let width = 8.0 * moment_width(params, s as f64, l);
    let mu = dist.mean();
    let half = s / 2;
    let (skipped, violations) = run_trials(trials, seed, |rng| {
        let threshold_book = draw_book(dist, half, rng);
        let mean_book = draw_book(dist, half, rng);
        let solve = threshold_book.solve(DEFAULT_THRESHOLD_C * l, SolverKind::ExactSegmentScan, 1e-16);
        let Some(m) = solve.m_hat else {
            return TrialOutcome::Skipped;
        };
        let mu_hat = mean_book.trimmed_sum(m) / half as f64;
        if libm::fabs(mu_hat - mu) > width {
            TrialOutcome::Violated
        } else {
            TrialOutcome::Held
        }
    })?;
    Ok(CoverageReport::from_counts(
        trials,
        skipped,
        violations,
        4.0 * delta,
        DEFAULT_SLACK_SIGMAS,
    ))
}

/// One-sided check of the empirical upper confidence bound: the threshold
/// comes from an independent book of `s` samples, and a trial violates when
/// `μ > μ̂ + √(2 V L / s) + 10 M̂ L / s`. Nominal rate `2δ`.
pub fn check_ucb_validity(
    dist: &RewardDistribution,
    s: usize,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if !dist.satisfies_truncated_nonpositivity() {
        return Err(Error::AssumptionViolated);
    }
    if s < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: s });
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::domain("delta", "lie in (0,1/2)", delta));
    }
    let l = log_inv_delta(delta)?;
    let mu = dist.mean();
    let (skipped, violations) = run_trials(trials, seed, |rng| {
        let threshold_book = draw_book(dist, s, rng);
        let mean_book = draw_book(dist, s, rng);
        let solve = threshold_book.solve(DEFAULT_THRESHOLD_C * l, SolverKind::ExactSegmentScan, 1e-16);
        let Some(m) = solve.m_hat else {
            return TrialOutcome::Skipped;
        };
        let est = mean_book.estimate(m).expect("s >= 2");
        let upper = est.mean_hat + empirical_width(est.variance_hat, m, s as f64, l);
        if mu > upper {
            TrialOutcome::Violated
        } else {
            TrialOutcome::Held
        }
    })?;
    Ok(CoverageReport::from_counts(
        trials,
        skipped,
        violations,
        2.0 * delta,
        DEFAULT_SLACK_SIGMAS,
    ))
}

/// Bracketing bisection on the directly evaluated residual; stops once
/// `hi - lo <= tol · lo`. Independent of the segment-scan solver.
pub fn bisection_oracle(samples: &[f64], target: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo > 0.0 && hi > lo && tol > 0.0) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    if !(residual(samples, lo, target)? > 0.0 && residual(samples, hi, target)? < 0.0) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(samples, mid, target)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A random threshold-equation instance: 2..=500 samples mixing exact zeros,
/// repeated values and magnitudes spread log-uniformly over `[1e-6, 1e6]`,
/// with a target drawn uniformly from `(0.01 n, 0.99 n)` for `n` nonzero
/// samples.
pub fn random_solver_case<R: RngCore + ?Sized>(rng: &mut R) -> (Vec<f64>, f64) {
    let size = 2 + (rng.next_u64() % 499) as usize;
    let zero_share = unit_f64(rng) * 0.5;
    let tie_share = unit_f64(rng) * 0.5;
    let mut samples: Vec<f64> = Vec::with_capacity(size);
    while samples.len() < size {
        let u = unit_f64(rng);
        let x = if u < zero_share {
            0.0
        } else if u < zero_share + tie_share && !samples.is_empty() {
            let j = (rng.next_u64() % samples.len() as u64) as usize;
            let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
            sign * samples[j]
        } else {
            let magnitude = libm::exp10(-6.0 + 12.0 * unit_f64(rng));
            if rng.next_u64() & 1 == 0 {
                magnitude
            } else {
                -magnitude
            }
        };
        samples.push(x);
    }
    if samples.iter().all(|&x| x == 0.0) {
        samples[0] = 1.0;
    }
    let n = samples.iter().filter(|&&x| x != 0.0).count() as f64;
    let target = n * (0.01 + 0.98 * unit_f64(rng));
    (samples, target)
}
