use alloc::vec::Vec;

use libm::sqrt;

use super::log_inv_delta;
use crate::{Error, Result, DEFAULT_THRESHOLD_C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Closed form on the segment between consecutive sorted magnitudes.
    #[default]
    ExactSegmentScan,
    /// Start at `eta` and double while the residual is positive. Returns a
    /// point in `[M̂, 2 M̂)` whenever `eta <= M̂`.
    Doubling,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConfig {
    pub c: f64,
    pub eta: f64,
    pub solver: SolverKind,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            c: DEFAULT_THRESHOLD_C,
            eta: 1e-16,
            solver: SolverKind::ExactSegmentScan,
        }
    }
}

impl ThresholdConfig {
    pub fn new(c: f64, eta: f64, solver: SolverKind) -> Result<Self> {
        if !(c > 2.0 && c.is_finite()) {
            return Err(Error::domain("c", "be finite and > 2", c));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::domain("eta", "be finite and > 0", eta));
        }
        Ok(Self { c, eta, solver })
    }
}

/// Outcome of solving the threshold equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSolve {
    /// The positive root, absent when the existence condition fails.
    pub m_hat: Option<f64>,
    /// Residual at `m_hat`.
    pub residual: Option<f64>,
    pub n_nonzero: usize,
    /// `c·ln(1/δ)`
    pub target: f64,
    /// Doublings performed by [`SolverKind::Doubling`]; zero for the exact scan.
    pub doubling_steps: u32,
}

impl ThresholdSolve {
    pub fn exists(&self) -> bool {
        self.m_hat.is_some()
    }
}

/// Solves with `target = cfg.c · ln(1/δ)`.
pub fn solve_threshold(samples: &[f64], delta: f64, cfg: &ThresholdConfig) -> Result<ThresholdSolve> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let target = cfg.c * log_inv_delta(delta)?;
    Ok(solve_for_target(samples, target, cfg.solver, cfg.eta))
}

/// Solves the threshold equation for an explicit right-hand side `target`.
pub fn solve_for_target(samples: &[f64], target: f64, solver: SolverKind, eta: f64) -> ThresholdSolve {
    let groups = square_groups(samples);
    solve_groups(groups.iter().copied(), samples.len(), target, solver, eta)
}

/// Distinct nonzero squares in ascending order with multiplicities.
pub(crate) fn square_groups(samples: &[f64]) -> Vec<(f64, u64)> {
    let mut squares: Vec<f64> = samples.iter().filter(|&&x| x != 0.0).map(|&x| x * x).collect();
    squares.sort_unstable_by(f64::total_cmp);
    let mut groups: Vec<(f64, u64)> = Vec::new();
    for sq in squares {
        match groups.last_mut() {
            Some((last, count)) if *last == sq => *count += 1,
            _ => groups.push((sq, 1)),
        }
    }
    groups
}

/// `Σ_j min{X_j², M²}/M²` from grouped squares.
fn clipped_ratio_sum<I>(groups: I, m: f64) -> f64
where
    I: Iterator<Item = (f64, u64)>,
{
    let m2 = m * m;
    groups.map(|(sq, count)| count as f64 * (sq / m2).min(1.0)).sum()
}

pub(crate) fn solve_groups<I>(
    groups: I,
    s: usize,
    target: f64,
    solver: SolverKind,
    eta: f64,
) -> ThresholdSolve
where
    I: Iterator<Item = (f64, u64)> + Clone,
{
    let n_nonzero: u64 = groups.clone().map(|(_, c)| c).sum();
    let mut out = ThresholdSolve {
        m_hat: None,
        residual: None,
        n_nonzero: n_nonzero as usize,
        target,
        doubling_steps: 0,
    };
    if !(target > 0.0 && target < n_nonzero as f64) {
        return out;
    }
    let root = match solver {
        SolverKind::ExactSegmentScan => segment_scan(groups.clone(), n_nonzero as f64, target),
        SolverKind::Doubling => {
            let mut x = eta;
            while clipped_ratio_sum(groups.clone(), x) > target {
                x *= 2.0;
                out.doubling_steps += 1;
            }
            x
        }
    };
    out.m_hat = Some(root);
    out.residual = Some((clipped_ratio_sum(groups, root) - target) / s as f64);
    out
}

/// On `M² ∈ (g_{j-1}, g_j]` the equation reads `n_≥ + S_< / M² = target`,
/// where `n_≥` counts squares `>= g_j` and `S_<` sums the squares below.
/// The left side is nonincreasing in `M`, so the first breakpoint where it
/// drops to `target` closes the segment holding the root.
fn segment_scan<I>(groups: I, n: f64, target: f64) -> f64
where
    I: Iterator<Item = (f64, u64)>,
{
    let mut below_sum = 0.0;
    let mut above = n;
    for (sq, count) in groups {
        if above + below_sum / sq <= target {
            return sqrt(below_sum / (target - above));
        }
        below_sum += sq * count as f64;
        above -= count as f64;
    }
    sqrt(below_sum / target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::residual;
    use libm::fabs;

    fn exact(samples: &[f64], target: f64) -> ThresholdSolve {
        solve_for_target(samples, target, SolverKind::ExactSegmentScan, 1e-16)
    }

    #[test]
    fn ones_root_is_sqrt_two() {
        let r = exact(&[1.0; 4], 2.0);
        assert!(fabs(r.m_hat.unwrap() - core::f64::consts::SQRT_2) < 1e-12);
        assert!(fabs(r.residual.unwrap()) < 1e-15);
        assert_eq!(r.n_nonzero, 4);
    }

    #[test]
    fn single_nonzero_root() {
        let r = exact(&[2.0, 0.0, 0.0, 0.0], 0.5);
        assert!(fabs(r.m_hat.unwrap() - 2.0 * core::f64::consts::SQRT_2) < 1e-12);
    }

    #[test]
    fn no_root_without_nonzero_samples() {
        for target in [0.1, 1.0, 5.0] {
            let r = exact(&[0.0; 3], target);
            assert!(!r.exists());
            assert_eq!(r.n_nonzero, 0);
        }
    }

    #[test]
    fn existence_boundaries() {
        let xs = [1.0, -2.0, 0.0, 3.0];
        assert!(!exact(&xs, 3.0).exists());
        assert!(!exact(&xs, 0.0).exists());
        assert!(exact(&xs, 2.999).exists());
        assert!(exact(&xs, 1e-9).exists());
    }

    #[test]
    fn root_inside_interior_segment() {
        // squares 1, 4, 9, 16; target 2.5. The left side is 2 + 5/9 at
        // M = 3 and 1 + 14/16 at M = 4, so n_≥ = 1, S_< = 14, M² = 14 / 1.5.
        let xs = [1.0, -2.0, 3.0, 4.0];
        let r = exact(&xs, 2.5);
        let m = r.m_hat.unwrap();
        assert!(m > 3.0 && m < 4.0, "{m}");
        assert!(fabs(m * m - 28.0 / 3.0) < 1e-12);
        assert!(fabs(residual(&xs, m, 2.5).unwrap()) < 1e-15);
    }

    #[test]
    fn ties_are_grouped() {
        let groups = square_groups(&[1.0, -1.0, 0.0, 2.0, 1.0]);
        assert_eq!(groups, [(1.0, 3), (4.0, 1)]);
    }

    #[test]
    fn doubling_brackets_root() {
        let r = solve_for_target(&[1.0; 4], 2.0, SolverKind::Doubling, 1e-16);
        let ratio = r.m_hat.unwrap() / core::f64::consts::SQRT_2;
        assert!((1.0..=2.0).contains(&ratio), "{ratio}");
        assert!(r.doubling_steps > 50);
    }

    #[test]
    fn doubling_stops_immediately_when_eta_overshoots() {
        let r = solve_for_target(&[1.0; 4], 2.0, SolverKind::Doubling, 10.0);
        assert_eq!(r.m_hat, Some(10.0));
        assert_eq!(r.doubling_steps, 0);
    }

    #[test]
    fn config_validation() {
        assert!(ThresholdConfig::new(2.0, 1e-16, SolverKind::Doubling).is_err());
        assert!(ThresholdConfig::new(3.0, 0.0, SolverKind::Doubling).is_err());
        let d = ThresholdConfig::default();
        assert!(d.c > 5.828_427_124_746 && d.c < 5.828_427_124_747);
    }

    #[test]
    fn solve_threshold_uses_log_inverse_delta() {
        let cfg = ThresholdConfig::new(2.0 + 1e-12, 1e-16, SolverKind::ExactSegmentScan).unwrap();
        let delta = libm::exp(-1.0);
        let r = solve_threshold(&[1.0; 4], delta, &cfg).unwrap();
        assert!(fabs(r.target - 2.0) < 1e-9);
        assert!(solve_threshold(&[], 0.5, &cfg).is_err());
        assert!(solve_threshold(&[1.0], 1.0, &cfg).is_err());
    }
}
