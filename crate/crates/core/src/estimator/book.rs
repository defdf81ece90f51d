use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use libm::fabs;

use super::solver::{solve_groups, SolverKind, ThresholdSolve};
use super::{check_threshold, TrimmedEstimate};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct SignCounts {
    pos: u64,
    neg: u64,
}

/// Insert-only sample multiset indexed by magnitude.
///
/// Keeps the raw samples in arrival order plus a sorted map from each
/// distinct nonzero magnitude to its signed counts, so threshold solves and
/// trimmed statistics cost `O(#distinct magnitudes)` rather than a re-sort.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleBook {
    values: Vec<f64>,
    // Nonnegative f64 bit patterns sort like the values they encode.
    magnitudes: BTreeMap<u64, SignCounts>,
    zeros: usize,
}

impl SampleBook {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        debug_assert!(x.is_finite());
        self.values.push(x);
        if x == 0.0 {
            self.zeros += 1;
            return;
        }
        let counts = self.magnitudes.entry(fabs(x).to_bits()).or_default();
        if x > 0.0 {
            counts.pos += 1;
        } else {
            counts.neg += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.len() - self.zeros
    }

    fn groups(&self) -> impl Iterator<Item = (f64, SignCounts)> + Clone + '_ {
        self.magnitudes
            .iter()
            .map(|(&bits, &counts)| (f64::from_bits(bits), counts))
    }

    /// `Σ X_j 1{|X_j| <= M}`
    pub fn trimmed_sum(&self, m: f64) -> f64 {
        self.groups()
            .take_while(|&(mag, _)| mag <= m)
            .map(|(mag, c)| (c.pos as f64 - c.neg as f64) * mag)
            .sum()
    }

    pub fn trimmed_mean(&self, m: f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptySamples);
        }
        check_threshold(m)?;
        Ok(self.trimmed_sum(m) / self.len() as f64)
    }

    pub fn trimmed_variance(&self, m: f64) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: self.len(),
            });
        }
        let mean = self.trimmed_mean(m)?;
        let mut kept = 0u64;
        let mut ss = 0.0;
        for (mag, c) in self.groups().take_while(|&(mag, _)| mag <= m) {
            ss += c.pos as f64 * (mag - mean) * (mag - mean);
            ss += c.neg as f64 * (mag + mean) * (mag + mean);
            kept += c.pos + c.neg;
        }
        // Zeros and trimmed samples both contribute (0 - mean)².
        ss += (self.len() as u64 - kept) as f64 * mean * mean;
        Ok(ss / (self.len() - 1) as f64)
    }

    pub fn estimate(&self, m: f64) -> Result<TrimmedEstimate> {
        Ok(TrimmedEstimate {
            mean_hat: self.trimmed_mean(m)?,
            variance_hat: self.trimmed_variance(m)?,
            threshold: m,
            n: self.len(),
        })
    }

    /// Threshold root for `target = c·ln(1/δ)` over the samples in this book.
    pub fn solve(&self, target: f64, solver: SolverKind, eta: f64) -> ThresholdSolve {
        let squares = self
            .groups()
            .map(|(mag, c)| (mag * mag, c.pos + c.neg));
        solve_groups(squares, self.len(), target, solver, eta)
    }
}

impl Extend<f64> for SampleBook {
    fn extend<T: IntoIterator<Item = f64>>(&mut self, iter: T) {
        for x in iter {
            self.push(x);
        }
    }
}

impl FromIterator<f64> for SampleBook {
    fn from_iter<T: IntoIterator<Item = f64>>(iter: T) -> Self {
        let mut book = SampleBook::new();
        book.extend(iter);
        book
    }
}
