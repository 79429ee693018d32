//! Deterministic seed expansion.
//!
//! A master seed expands to per-trial or per-shard sub-seeds with
//! `splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)`. Each sub-seed
//! drives its own ChaCha8 stream, so sharded work is reproducible no matter
//! how it is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Human-readable statement of the split rule, embedded in reports.
pub const SPLIT_RULE: &str = "sub_seed(i) = splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15); rng = ChaCha8(sub_seed)";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sub_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
