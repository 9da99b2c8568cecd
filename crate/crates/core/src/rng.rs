//! Seed derivation and the RNG used everywhere.
//!
//! All randomness in this crate flows from explicit 64-bit seeds through
//! [`rng_from_seed`] (ChaCha8, platform-independent). Independent streams are
//! derived with [`derive_seed`]: `child = splitmix64(parent ^ splitmix64(tag))`.
//! The rule is part of the reproducibility contract: instance `i` of a
//! campaign, or evaluation stream `k` of a run, can be regenerated in
//! isolation from the master seed alone.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One SplitMix64 output step (Steele, Lea, Flood 2014).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the `tag`-th child seed of `parent`.
pub fn derive_seed(parent: u64, tag: u64) -> u64 {
    splitmix64(parent ^ splitmix64(tag))
}

/// Deterministic, seedable generator with a stable cross-platform stream.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
