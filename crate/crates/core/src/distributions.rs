//! Reward laws with exact moments and the hard bandit instances.
//!
//! Every law shipped here is a finite mixture of Dirac atoms, so the mean,
//! absolute moments, nonzero mass and truncated non-positivity are computed
//! in closed form instead of being estimated.

use alloc::vec::Vec;
use core::cmp::Ordering;

use libm::{fabs, pow};

use crate::rng::{unit_f64, RngCore};
use crate::{Error, Result};

const MASS_TOLERANCE: f64 = 1e-12;
const MOMENT_TOLERANCE: f64 = 1e-9;

/// Moment order `epsilon` and moment bound `u` of the class of laws with
/// `E|X|^(1+epsilon) <= u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeavyTailParams {
    epsilon: f64,
    u: f64,
}

impl HeavyTailParams {
    pub fn new(epsilon: f64, u: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::domain("epsilon", "lie in (0,1]", epsilon));
        }
        if !(u >= 0.0 && u.is_finite()) {
            return Err(Error::domain("u", "be finite and >= 0", u));
        }
        Ok(Self { epsilon, u })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// `1 + epsilon`
    pub fn moment_order(&self) -> f64 {
        1.0 + self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

impl Atom {
    pub const fn new(value: f64, mass: f64) -> Self {
        Self { value, mass }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    /// Mixture with at least one positive atom.
    DiracMixture,
    /// Mixture supported on `(-inf, 0]`.
    NegativeDiracMixture,
    /// A single atom.
    PointMass,
}

/// Interface a reward law must offer to the engine and the checks.
///
/// Only [`RewardDistribution`] implements it today. A continuous law would
/// have to approximate [`RewardLaw::satisfies_truncated_nonpositivity`].
pub trait RewardLaw {
    fn mean(&self) -> f64;
    fn moment(&self, alpha: f64) -> f64;
    fn nonzero_mass(&self) -> f64;
    fn satisfies_truncated_nonpositivity(&self) -> bool;
    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64;
}

/// A finite Dirac mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardDistribution {
    kind: DistributionKind,
    atoms: Vec<Atom>,
    cumulative: Vec<f64>,
}

impl RewardDistribution {
    /// Builds a mixture from atoms; masses must be nonnegative and sum to one
    /// within `1e-12`. Zero-mass atoms are dropped.
    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        let mut sum = 0.0;
        for atom in &atoms {
            if !atom.value.is_finite() {
                return Err(Error::NonFiniteAtom);
            }
            if !(atom.mass >= 0.0 && atom.mass.is_finite()) {
                return Err(Error::InvalidMasses { sum: atom.mass });
            }
            sum += atom.mass;
        }
        if fabs(sum - 1.0) > MASS_TOLERANCE {
            return Err(Error::InvalidMasses { sum });
        }
        let atoms: Vec<Atom> = atoms.into_iter().filter(|a| a.mass > 0.0).collect();
        let kind = if atoms.len() == 1 {
            DistributionKind::PointMass
        } else if atoms.iter().all(|a| a.value <= 0.0) {
            DistributionKind::NegativeDiracMixture
        } else {
            DistributionKind::DiracMixture
        };
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += a.mass;
                acc
            })
            .collect();
        Ok(Self {
            kind,
            atoms,
            cumulative,
        })
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        Self::from_atoms([Atom::new(value, 1.0)])
    }

    /// `(1 - p) δ_0 + p δ_x`, collapsing to a point mass when `p` is 0 or 1.
    pub fn two_point(x: f64, p: f64) -> Result<Self> {
        Self::from_atoms([Atom::new(0.0, 1.0 - p), Atom::new(x, p)])
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.value).sum()
    }

    /// `E|X|^alpha`
    pub fn moment(&self, alpha: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.mass * pow(fabs(a.value), alpha))
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.atoms
            .iter()
            .map(|a| a.mass * (a.value - mean) * (a.value - mean))
            .sum()
    }

    pub fn nonzero_mass(&self) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.value != 0.0)
            .fold(0.0, |acc, a| acc + a.mass)
    }

    /// Whether `E[X 1{|X| > M}] <= 0` for every `M >= 0`.
    ///
    /// The tail sum only changes at atom magnitudes, so checking `M = 0` and
    /// every distinct `|value|` covers all thresholds.
    pub fn satisfies_truncated_nonpositivity(&self) -> bool {
        let mut by_magnitude: Vec<Atom> = self.atoms.clone();
        by_magnitude.sort_by(|a, b| fabs(b.value).total_cmp(&fabs(a.value)));
        let scale: f64 = self.atoms.iter().map(|a| a.mass * fabs(a.value)).sum();
        let tolerance = MASS_TOLERANCE * scale;
        // Walking magnitudes downward, the tail for M just below a group's
        // magnitude includes that whole group.
        let mut tail = 0.0;
        let mut i = 0;
        while i < by_magnitude.len() {
            let magnitude = fabs(by_magnitude[i].value);
            while i < by_magnitude.len() && fabs(by_magnitude[i].value) == magnitude {
                tail += by_magnitude[i].mass * by_magnitude[i].value;
                i += 1;
            }
            if magnitude > 0.0 && tail > tolerance {
                return false;
            }
        }
        true
    }

    /// Inverse-CDF draw over the cumulative masses.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = unit_f64(rng);
        let idx = self.cumulative.partition_point(|&c| c <= u);
        self.atoms[idx.min(self.atoms.len() - 1)].value
    }
}

impl RewardLaw for RewardDistribution {
    fn mean(&self) -> f64 {
        RewardDistribution::mean(self)
    }
    fn moment(&self, alpha: f64) -> f64 {
        RewardDistribution::moment(self, alpha)
    }
    fn nonzero_mass(&self) -> f64 {
        RewardDistribution::nonzero_mass(self)
    }
    fn satisfies_truncated_nonpositivity(&self) -> bool {
        RewardDistribution::satisfies_truncated_nonpositivity(self)
    }
    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        RewardDistribution::sample(self, rng)
    }
}

/// Free-function form of [`RewardDistribution::moment`].
pub fn moment(dist: &RewardDistribution, alpha: f64) -> f64 {
    dist.moment(alpha)
}

pub fn mean(dist: &RewardDistribution) -> f64 {
    dist.mean()
}

pub fn nonzero_mass(dist: &RewardDistribution) -> f64 {
    dist.nonzero_mass()
}

pub fn satisfies_truncated_nonpositivity(dist: &RewardDistribution) -> bool {
    dist.satisfies_truncated_nonpositivity()
}

/// Arms, their class parameters, and the derived gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<RewardDistribution>,
    params: HeavyTailParams,
    means: Vec<f64>,
    gaps: Vec<f64>,
    optimal_arm: usize,
}

impl BanditInstance {
    /// Validates `E|X|^(1+epsilon) <= u` (within `1e-9`) for every arm.
    /// The optimal arm is the lowest index attaining the largest mean.
    pub fn new(arms: Vec<RewardDistribution>, params: HeavyTailParams) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::NoArms);
        }
        for (arm, dist) in arms.iter().enumerate() {
            let moment = dist.moment(params.moment_order());
            if moment > params.u() + MOMENT_TOLERANCE {
                return Err(Error::MomentBound {
                    arm,
                    moment,
                    u: params.u(),
                });
            }
        }
        let means: Vec<f64> = arms.iter().map(RewardDistribution::mean).collect();
        let mut optimal_arm = 0;
        for (i, &m) in means.iter().enumerate() {
            if m > means[optimal_arm] {
                optimal_arm = i;
            }
        }
        let best = means[optimal_arm];
        let gaps = means.iter().map(|&m| (best - m).max(0.0)).collect();
        Ok(Self {
            arms,
            params,
            means,
            gaps,
            optimal_arm,
        })
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[RewardDistribution] {
        &self.arms
    }

    pub fn arm(&self, i: usize) -> &RewardDistribution {
        &self.arms[i]
    }

    pub fn params(&self) -> HeavyTailParams {
        self.params
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn optimal_arm(&self) -> usize {
        self.optimal_arm
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }
}

/// The two-instance constructions behind the lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerBoundInstance {
    /// `ν1 = δ0`, `ν2` a two-point law with mean `gap` and moment `u`.
    UAdaptiveBase { epsilon: f64, u: f64, gap: f64 },
    /// Arm 1 replaced by a two-point law with mean `2 gap` and moment `u_alt >= u`.
    UAdaptiveAlt {
        epsilon: f64,
        u: f64,
        u_alt: f64,
        gap: f64,
    },
    /// `ν1 = δ0`, `ν2` with finite moments only up to order `1 + epsilon` (u = 1).
    EpsAdaptiveBase { epsilon: f64, gap: f64 },
    /// Arm 1 replaced by a law with mean `2 gap` and moment order `1 + epsilon_alt`.
    EpsAdaptiveAlt {
        epsilon: f64,
        epsilon_alt: f64,
        gap: f64,
    },
    /// Arms built from the nonpositive prototype `ρ_y`. With `alt_arm = Some(i)`
    /// arm `i` (0-based, `i >= 1`) is replaced by `ρ_{(1/3)^(ε/(1+ε)) gap}`.
    AssumptionLb {
        arms: usize,
        epsilon: f64,
        u: f64,
        gap: f64,
        alt_arm: Option<usize>,
    },
}

fn check_gap(gap: f64, upper: f64, constraint: &'static str) -> Result<()> {
    if gap > 0.0 && gap < upper {
        Ok(())
    } else {
        Err(Error::domain("gap", constraint, gap))
    }
}

/// `(1 - Δ^(1+1/ε) u^(-1/ε)) δ_0 + Δ^(1+1/ε) u^(-1/ε) δ_{u^(1/ε) Δ^(-1/ε)}`:
/// mean `Δ`, `(1+ε)`-moment `u`.
fn u_two_point(epsilon: f64, u: f64, gap: f64) -> Result<RewardDistribution> {
    let inv = 1.0 / epsilon;
    let p = pow(gap, 1.0 + inv) * pow(u, -inv);
    let x = pow(u, inv) * pow(gap, -inv);
    RewardDistribution::two_point(x, p)
}

/// `ρ_y = (1 - y^(1+1/ε) u^(-1/ε)) δ_0 + y^(1+1/ε) u^(-1/ε) δ_{-u^(1/ε) Δ^(-1/ε)}`
pub fn rho(epsilon: f64, u: f64, gap: f64, y: f64) -> Result<RewardDistribution> {
    let limit = pow(u, 1.0 / (1.0 + epsilon));
    if !(y > 0.0 && y < limit) {
        return Err(Error::domain("y", "lie in (0, u^(1/(1+epsilon)))", y));
    }
    check_gap(gap, limit, "lie in (0, u^(1/(1+epsilon)))")?;
    let inv = 1.0 / epsilon;
    let p = pow(y, 1.0 + inv) * pow(u, -inv);
    let x = -pow(u, inv) * pow(gap, -inv);
    RewardDistribution::two_point(x, p)
}

pub fn make_lb_instance(which: LowerBoundInstance) -> Result<BanditInstance> {
    match which {
        LowerBoundInstance::UAdaptiveBase { epsilon, u, gap } => {
            let params = HeavyTailParams::new(epsilon, u)?;
            check_gap(
                gap,
                pow(u, 1.0 / (1.0 + epsilon)),
                "lie in (0, u^(1/(1+epsilon)))",
            )?;
            let arms = alloc::vec![
                RewardDistribution::point_mass(0.0)?,
                u_two_point(epsilon, u, gap)?,
            ];
            BanditInstance::new(arms, params)
        }
        LowerBoundInstance::UAdaptiveAlt {
            epsilon,
            u,
            u_alt,
            gap,
        } => {
            HeavyTailParams::new(epsilon, u)?;
            if !(u_alt >= u) {
                return Err(Error::domain("u_alt", "be >= u", u_alt));
            }
            let params = HeavyTailParams::new(epsilon, u_alt)?;
            check_gap(
                gap,
                pow(u, 1.0 / (1.0 + epsilon)),
                "lie in (0, u^(1/(1+epsilon)))",
            )?;
            check_gap(
                gap,
                0.5 * pow(u_alt, 1.0 / (1.0 + epsilon)),
                "lie in (0, u_alt^(1/(1+epsilon)) / 2)",
            )?;
            let arms = alloc::vec![
                u_two_point(epsilon, u_alt, 2.0 * gap)?,
                u_two_point(epsilon, u, gap)?,
            ];
            BanditInstance::new(arms, params)
        }
        LowerBoundInstance::EpsAdaptiveBase { epsilon, gap } => {
            let params = HeavyTailParams::new(epsilon, 1.0)?;
            if !(gap > 0.0 && gap <= 0.5) {
                return Err(Error::domain("gap", "lie in (0, 1/2]", gap));
            }
            let gamma = pow(2.0 * gap, 1.0 / epsilon);
            let p = pow(gamma, 1.0 + epsilon) - gap * gamma;
            let arms = alloc::vec![
                RewardDistribution::point_mass(0.0)?,
                RewardDistribution::from_atoms([
                    Atom::new(0.0, 1.0 + gap * gamma - pow(gamma, 1.0 + epsilon)),
                    Atom::new(1.0 / gamma, p),
                ])?,
            ];
            BanditInstance::new(arms, params)
        }
        LowerBoundInstance::EpsAdaptiveAlt {
            epsilon,
            epsilon_alt,
            gap,
        } => {
            HeavyTailParams::new(epsilon, 1.0)?;
            if !(epsilon_alt > 0.0 && epsilon_alt < epsilon) {
                return Err(Error::domain(
                    "epsilon_alt",
                    "lie in (0, epsilon)",
                    epsilon_alt,
                ));
            }
            let params = HeavyTailParams::new(epsilon_alt, 1.0)?;
            if !(gap > 0.0 && gap <= 0.5) {
                return Err(Error::domain("gap", "lie in (0, 1/2]", gap));
            }
            let gamma = pow(2.0 * gap, 1.0 / epsilon);
            let gamma_alt = pow(2.0 * gap, 1.0 / epsilon_alt);
            let arms = alloc::vec![
                RewardDistribution::two_point(1.0 / gamma_alt, pow(gamma_alt, 1.0 + epsilon_alt))?,
                RewardDistribution::from_atoms([
                    Atom::new(0.0, 1.0 + gap * gamma - pow(gamma, 1.0 + epsilon)),
                    Atom::new(1.0 / gamma, pow(gamma, 1.0 + epsilon) - gap * gamma),
                ])?,
            ];
            BanditInstance::new(arms, params)
        }
        LowerBoundInstance::AssumptionLb {
            arms,
            epsilon,
            u,
            gap,
            alt_arm,
        } => {
            let params = HeavyTailParams::new(epsilon, u)?;
            if arms < 2 {
                return Err(Error::domain("arms", "be >= 2", arms as f64));
            }
            if let Some(i) = alt_arm {
                if i == 0 || i >= arms {
                    return Err(Error::domain("alt_arm", "lie in [1, arms)", i as f64));
                }
            }
            check_gap(
                gap,
                pow(u, 1.0 / (1.0 + epsilon)),
                "lie in (0, u^(1/(1+epsilon)))",
            )?;
            let shrink = |frac: f64| pow(frac, epsilon / (1.0 + epsilon)) * gap;
            let mut dists = Vec::with_capacity(arms);
            dists.push(rho(epsilon, u, gap, shrink(2.0 / 3.0))?);
            for j in 1..arms {
                let y = if alt_arm == Some(j) {
                    shrink(1.0 / 3.0)
                } else {
                    gap
                };
                dists.push(rho(epsilon, u, gap, y)?);
            }
            BanditInstance::new(dists, params)
        }
    }
}

/// Sorts atoms by value; used to compare mixtures independent of order.
pub fn sorted_atoms(dist: &RewardDistribution) -> Vec<Atom> {
    let mut atoms = dist.atoms().to_vec();
    atoms.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal));
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        fabs(a - b) <= tol
    }

    #[test]
    fn point_mass_at_zero() {
        let d = RewardDistribution::point_mass(0.0).unwrap();
        assert_eq!(d.kind(), DistributionKind::PointMass);
        assert_eq!(d.moment(1.5), 0.0);
        assert_eq!(d.mean(), 0.0);
        assert_eq!(d.nonzero_mass(), 0.0);
        assert!(d.satisfies_truncated_nonpositivity());
    }

    #[test]
    fn u_adaptive_base_closed_forms() {
        let inst = make_lb_instance(LowerBoundInstance::UAdaptiveBase {
            epsilon: 0.5,
            u: 1.0,
            gap: 0.5,
        })
        .unwrap();
        assert!(close(inst.arm(1).moment(1.5), 1.0, 1e-12));
        assert!(close(inst.arm(1).mean(), 0.5, 1e-12));
        assert_eq!(inst.optimal_arm(), 1);

        let inst = make_lb_instance(LowerBoundInstance::UAdaptiveBase {
            epsilon: 1.0,
            u: 1.0,
            gap: 0.5,
        })
        .unwrap();
        let atoms = sorted_atoms(inst.arm(1));
        assert_eq!(atoms, [Atom::new(0.0, 0.75), Atom::new(2.0, 0.25)]);
        assert_eq!(inst.means(), [0.0, 0.5]);
        assert!(close(inst.arm(1).nonzero_mass(), 0.25, 1e-15));
        assert!(!inst.arm(1).satisfies_truncated_nonpositivity());
    }

    #[test]
    fn rho_closed_forms() {
        let (eps, u, gap) = (1.0, 1.0, 0.3);
        let d = rho(eps, u, gap, gap).unwrap();
        assert!(close(d.moment(2.0), u, 1e-12));
        assert!(close(d.nonzero_mass(), 0.09, 1e-15));
        let y = 0.2;
        let expected = -pow(y, 2.0) / gap;
        assert!(close(rho(eps, u, gap, y).unwrap().mean(), expected, 1e-12));
        assert_eq!(d.kind(), DistributionKind::NegativeDiracMixture);
    }

    #[test]
    fn assumption_lb_two_arms() {
        let inst = make_lb_instance(LowerBoundInstance::AssumptionLb {
            arms: 2,
            epsilon: 1.0,
            u: 1.0,
            gap: 0.3,
            alt_arm: None,
        })
        .unwrap();
        assert!(close(inst.means()[0], -0.2, 1e-12));
        assert!(close(inst.means()[1], -0.3, 1e-12));
        assert_eq!(inst.optimal_arm(), 0);
        assert!(close(inst.gaps()[1], 0.1, 1e-12));
        assert!(inst
            .arms()
            .iter()
            .all(RewardDistribution::satisfies_truncated_nonpositivity));
    }

    #[test]
    fn assumption_lb_alternative_moves_optimum() {
        let inst = make_lb_instance(LowerBoundInstance::AssumptionLb {
            arms: 4,
            epsilon: 0.5,
            u: 2.0,
            gap: 0.4,
            alt_arm: Some(2),
        })
        .unwrap();
        assert_eq!(inst.optimal_arm(), 2);
        assert!(close(inst.means()[2], -0.4 / 3.0, 1e-12));
        assert!(close(inst.means()[0], -0.8 / 3.0, 1e-12));
        assert!(close(inst.means()[3], -0.4, 1e-12));
    }

    #[test]
    fn eps_adaptive_pair() {
        let base = make_lb_instance(LowerBoundInstance::EpsAdaptiveBase {
            epsilon: 0.5,
            gap: 0.25,
        })
        .unwrap();
        assert!(close(base.means()[1], 0.25, 1e-12));
        assert_eq!(base.optimal_arm(), 1);
        // γ = 0.25: mass γ^1.5 - Δγ = 0.0625 at 4.
        assert_eq!(
            sorted_atoms(base.arm(1)),
            [Atom::new(0.0, 0.9375), Atom::new(4.0, 0.0625)]
        );

        let alt = make_lb_instance(LowerBoundInstance::EpsAdaptiveAlt {
            epsilon: 1.0,
            epsilon_alt: 1.0 / 3.0,
            gap: 0.2,
        })
        .unwrap();
        assert_eq!(alt.optimal_arm(), 0);
        assert!(close(alt.means()[0], 0.4, 1e-12));
        assert!(close(alt.means()[1], 0.2, 1e-12));
        assert!(close(alt.arm(0).moment(1.0 + 1.0 / 3.0), 1.0, 1e-12));
    }

    #[test]
    fn u_adaptive_alt_pair() {
        let alt = make_lb_instance(LowerBoundInstance::UAdaptiveAlt {
            epsilon: 1.0,
            u: 1.0,
            u_alt: 4.0,
            gap: 0.25,
        })
        .unwrap();
        assert_eq!(alt.optimal_arm(), 0);
        assert!(close(alt.means()[0], 0.5, 1e-12));
        assert!(close(alt.arm(0).moment(2.0), 4.0, 1e-12));
        assert!(close(alt.arm(1).moment(2.0), 1.0, 1e-12));
    }

    #[test]
    fn out_of_range_parameters_rejected() {
        let err = make_lb_instance(LowerBoundInstance::UAdaptiveBase {
            epsilon: 1.0,
            u: 1.0,
            gap: 1.0,
        });
        assert!(matches!(err, Err(Error::Domain { name: "gap", .. })));
        assert!(rho(1.0, 1.0, 0.3, 1.5).is_err());
        assert!(make_lb_instance(LowerBoundInstance::EpsAdaptiveAlt {
            epsilon: 0.5,
            epsilon_alt: 0.7,
            gap: 0.2
        })
        .is_err());
        assert!(make_lb_instance(LowerBoundInstance::AssumptionLb {
            arms: 3,
            epsilon: 1.0,
            u: 1.0,
            gap: 0.3,
            alt_arm: Some(0)
        })
        .is_err());
        assert!(HeavyTailParams::new(1.5, 1.0).is_err());
        assert!(HeavyTailParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn moment_bound_checked_on_construction() {
        let d = RewardDistribution::two_point(10.0, 0.5).unwrap();
        let params = HeavyTailParams::new(1.0, 1.0).unwrap();
        assert!(matches!(
            BanditInstance::new(alloc::vec![d], params),
            Err(Error::MomentBound { arm: 0, .. })
        ));
    }

    #[test]
    fn masses_must_sum_to_one() {
        assert!(matches!(
            RewardDistribution::from_atoms([Atom::new(0.0, 0.5), Atom::new(1.0, 0.4)]),
            Err(Error::InvalidMasses { .. })
        ));
        assert!(RewardDistribution::from_atoms([Atom::new(0.0, -0.5), Atom::new(1.0, 1.5)]).is_err());
        assert!(RewardDistribution::from_atoms([Atom::new(f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn truncated_nonpositivity_mixed_signs() {
        // For M in [1, 2) only the atom at 2 is in the tail.
        let d = RewardDistribution::from_atoms([
            Atom::new(-1.0, 0.5),
            Atom::new(2.0, 0.25),
            Atom::new(0.0, 0.25),
        ])
        .unwrap();
        assert!(!d.satisfies_truncated_nonpositivity());
        let d = RewardDistribution::from_atoms([
            Atom::new(-1.0, 0.5),
            Atom::new(4.0, 0.5),
        ])
        .unwrap();
        assert!(!d.satisfies_truncated_nonpositivity());
        // Large negative atom dominates every tail.
        let d = RewardDistribution::from_atoms([
            Atom::new(-4.0, 0.5),
            Atom::new(1.0, 0.5),
        ])
        .unwrap();
        assert!(d.satisfies_truncated_nonpositivity());
        let d = RewardDistribution::from_atoms([
            Atom::new(-4.0, 0.5),
            Atom::new(3.0, 0.25),
            Atom::new(0.0, 0.25),
        ])
        .unwrap();
        // tails: M<3: -2 + 0.75 < 0 ; 3<=M<4: -2.
        assert!(d.satisfies_truncated_nonpositivity());
    }

    #[test]
    fn sampling_frequencies_match_masses() {
        let d = RewardDistribution::from_atoms([
            Atom::new(-1.0, 0.2),
            Atom::new(0.0, 0.5),
            Atom::new(3.0, 0.3),
        ])
        .unwrap();
        let mut rng = stream(11);
        let n = 200_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            match d.sample(&mut rng) as i64 {
                -1 => counts[0] += 1,
                0 => counts[1] += 1,
                3 => counts[2] += 1,
                _ => unreachable!(),
            }
        }
        for (c, p) in counts.iter().zip([0.2, 0.5, 0.3]) {
            let sd = libm::sqrt(p * (1.0 - p) / n as f64);
            assert!(fabs(*c as f64 / n as f64 - p) < 5.0 * sd);
        }
    }
}
