//! Deterministic seed splitting for parallel Monte Carlo runs.
//!
//! Every random stream in a batch is derived from
//! `(master_seed, run_index, stream_tag)` by a fixed SplitMix64-style hash,
//! so results never depend on scheduling or the degree of parallelism. The
//! rule is part of the output contract and must not change:
//!
//! ```text
//! h = mix64(master_seed ^ 0x9E3779B97F4A7C15)
//! h = mix64(h ^ run_index  * 0xA0761D6478BD642F)
//! h = mix64(h ^ stream_tag * 0xE7037ED1A0B428DB)
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer. The environment and the
//! policy draw from disjoint streams; the policies implemented today are
//! deterministic, so the policy stream is reserved but never consumed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tag for environment randomness (band initial states and steps).
pub const ENV_STREAM: u64 = 1;
/// Stream tag reserved for policy randomness.
pub const POLICY_STREAM: u64 = 2;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for one `(run, stream)` slot of a batch.
pub fn child_seed(master_seed: u64, run_index: u64, stream_tag: u64) -> u64 {
    let mut h = mix64(master_seed ^ 0x9E37_79B9_7F4A_7C15);
    h = mix64(h ^ run_index.wrapping_mul(0xA076_1D64_78BD_642F));
    h = mix64(h ^ stream_tag.wrapping_mul(0xE703_7ED1_A0B4_28DB));
    h
}

/// Generator seeded for one `(run, stream)` slot.
pub fn child_rng(master_seed: u64, run_index: u64, stream_tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(master_seed, run_index, stream_tag))
}
