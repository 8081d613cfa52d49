//! Seed hierarchy: master seed → child seeds by index → per-shot ChaCha streams.
//!
//! Every random draw is a pure function of `(seed, index)`, so results do not depend on
//! how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for `index` under `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix(mix(parent ^ 0x6a09_e667_f3bc_c909).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Independent generator for shot `shot` of an experiment seeded with `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}
