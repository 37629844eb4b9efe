//! Counter-mode seed derivation.
//!
//! The `i`-th derived seed is the `i`-th output of a SplitMix64 stream
//! started at the root, computed directly from the counter, so any seed can
//! be derived without generating the ones before it.

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(root: u64, index: u64) -> u64 {
    mix(root.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// Root seed of sweep point `point`.
pub fn point_seed(root: u64, point: usize) -> u64 {
    derive_seed(root ^ 0x5357_4545_5000_0000, point as u64)
}

/// Seed of counterfactual rollout `r` from an encounter seeded `seed`. The
/// same `r` is used for every candidate, so candidates share randomness.
pub fn rollout_seed(seed: u64, r: usize) -> u64 {
    derive_seed(seed ^ 0x524f_4c4c_0000_0000, r as u64)
}
