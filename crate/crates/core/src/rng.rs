//! Seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha stream keyed by a
//! 64-bit seed mixed with a call-site tag, so a draw never depends on how
//! many other draws happened before it or on which thread ran it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tag for sampling-set draws.
pub const TAG_SAMPLING: u64 = 0x5341_4d50_4c49_4e47;
/// Tag for generator-vector draws.
pub const TAG_GENERATOR: u64 = 0x4745_4e45_5241_544f;
/// Tag for random test signals.
pub const TAG_SIGNAL: u64 = 0x5349_474e_414c_0000;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `parts` into `seed`. A pure function of its arguments.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Independent generator for the call site identified by `tag`.
pub fn stream(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[tag]))
}
