//! Seed derivation and the random stream type shared by the engine and the
//! Monte Carlo checks.
//!
//! Every stream is a xoshiro256++ generator seeded through SplitMix64. Seeds
//! for replication `i` (or trial `i`) of a run with master seed `m` are
//! `derive_seed(m, i)`, which is the `(i + 1)`-th SplitMix64 output started
//! from state `m`:
//!
//! ```text
//! z = m + (i + 1) * 0x9E3779B97F4A7C15          (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z ^ (z >> 31)
//! ```
//!
//! Seeds of earlier indices never depend on how many indices are drawn.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub use rand::RngCore;

/// Random stream used for reward sampling and policy randomization.
pub type Stream = Xoshiro256PlusPlus;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream tag for reward draws inside a replication.
pub const REWARD_STREAM: u64 = 0;
/// Stream tag for the policy's own randomness inside a replication.
pub const POLICY_STREAM: u64 = 1;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

pub fn stream(seed: u64) -> Stream {
    Stream::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)` with 53 bits of resolution.
#[inline]
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
