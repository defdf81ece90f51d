//! Trimmed mean with an empirical trimming threshold.
//!
//! The threshold `M̂` is the positive root of
//!
//! ```text
//! f(M) = (1/s) Σ_j min{X_j², M²} / M²  -  c·ln(1/δ) / s
//! ```
//!
//! which exists and is unique iff `0 < c·ln(1/δ) < #{j : X_j ≠ 0}`. The
//! trimmed mean and variance then zero out every observation with
//! `|X_j| > M`. Widths:
//!
//! - empirical (no moment knowledge): `√(2 V L / s) + 10 M L / s`,
//! - moment-based: `8 u^(1/(1+ε)) (L/s)^(ε/(1+ε))` for the empirical
//!   threshold and `4 u^(1/(1+ε)) (L/s)^(ε/(1+ε))` for the non-adaptive one,
//!
//! with `L = ln(1/δ)`.

mod book;
mod solver;

pub use book::SampleBook;
pub use solver::{solve_for_target, solve_threshold, SolverKind, ThresholdConfig, ThresholdSolve};

use libm::{fabs, log, pow, sqrt};

use crate::distributions::HeavyTailParams;
use crate::{Error, Result};

pub(crate) fn check_threshold(m: f64) -> Result<()> {
    if m >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain("M", "be >= 0", m))
    }
}

pub(crate) fn log_inv_delta(delta: f64) -> Result<f64> {
    if delta > 0.0 && delta < 1.0 {
        Ok(-log(delta))
    } else {
        Err(Error::domain("delta", "lie in (0,1)", delta))
    }
}

/// `(1/s) Σ X_j 1{|X_j| <= M}`
pub fn trimmed_mean(samples: &[f64], m: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    check_threshold(m)?;
    let sum: f64 = samples.iter().filter(|x| fabs(**x) <= m).sum();
    Ok(sum / samples.len() as f64)
}

/// `(1/(s-1)) Σ (X_j 1{|X_j| <= M} - μ̂)²`
pub fn trimmed_variance(samples: &[f64], m: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let mean = trimmed_mean(samples, m)?;
    let ss: f64 = samples
        .iter()
        .map(|&x| {
            let y = if fabs(x) <= m { x } else { 0.0 };
            (y - mean) * (y - mean)
        })
        .sum();
    Ok(ss / (samples.len() - 1) as f64)
}

/// The threshold equation evaluated directly from its definition.
pub fn residual(samples: &[f64], m: f64, target: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::domain("M", "be > 0", m));
    }
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let m2 = m * m;
    let sum: f64 = samples.iter().map(|&x| (x * x).min(m2) / m2).sum();
    let s = samples.len() as f64;
    Ok(sum / s - target / s)
}

/// Trimmed mean and variance at a given threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimmedEstimate {
    pub mean_hat: f64,
    pub variance_hat: f64,
    pub threshold: f64,
    pub n: usize,
}

impl TrimmedEstimate {
    /// Needs at least two samples.
    pub fn from_samples(samples: &[f64], threshold: f64) -> Result<Self> {
        Ok(Self {
            mean_hat: trimmed_mean(samples, threshold)?,
            variance_hat: trimmed_variance(samples, threshold)?,
            threshold,
            n: samples.len(),
        })
    }
}

/// `(u s / ln(1/δ))^(1/(1+ε))`, the threshold that needs `(ε, u)`.
pub fn nonadaptive_threshold(params: HeavyTailParams, s: usize, delta: f64) -> Result<f64> {
    if s == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let l = log_inv_delta(delta)?;
    if !(params.u() > 0.0) {
        return Err(Error::domain("u", "be > 0", params.u()));
    }
    Ok(nonadaptive_threshold_log(params, s as f64, l))
}

pub(crate) fn nonadaptive_threshold_log(params: HeavyTailParams, s: f64, l: f64) -> f64 {
    pow(params.u() * s / l, 1.0 / params.moment_order())
}

/// `√(2 V L / s) + 10 M L / s` with `L = log_inv_delta`.
pub fn ucb_width_empirical(est: &TrimmedEstimate, log_inv_delta: f64) -> f64 {
    empirical_width(
        est.variance_hat,
        est.threshold,
        est.n as f64,
        log_inv_delta,
    )
}

#[inline]
pub(crate) fn empirical_width(variance: f64, threshold: f64, n: f64, l: f64) -> f64 {
    sqrt(2.0 * variance * l / n) + 10.0 * threshold * l / n
}

/// Moment-based widths: `adaptive` for the empirical threshold (constant 8),
/// `nonadaptive` for the known-parameter threshold (constant 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationWidths {
    pub adaptive: f64,
    pub nonadaptive: f64,
}

pub fn conc_width_oracle(params: HeavyTailParams, s: usize, delta: f64) -> Result<ConcentrationWidths> {
    if s == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let l = log_inv_delta(delta)?;
    let base = moment_width(params, s as f64, l);
    Ok(ConcentrationWidths {
        adaptive: 8.0 * base,
        nonadaptive: 4.0 * base,
    })
}

/// `u^(1/(1+ε)) (L/s)^(ε/(1+ε))`
#[inline]
pub(crate) fn moment_width(params: HeavyTailParams, s: f64, l: f64) -> f64 {
    let order = params.moment_order();
    pow(params.u(), 1.0 / order) * pow(l / s, params.epsilon() / order)
}
