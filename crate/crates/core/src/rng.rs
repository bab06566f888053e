//! Seed derivation and the pinned random generator.
//!
//! Every stochastic routine draws from [`ChaCha8Rng`] (`rand_chacha`): a
//! counter-based stream cipher generator with a 256-bit key and a 64-bit
//! block counter. A `u64` seed is expanded to the key with
//! `SeedableRng::seed_from_u64`. Child seeds for parallel work units are
//! derived with [`hash64`] so results never depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a sequence of integer coordinates (class, index,
/// split number, ...) into an independent child seed.
pub fn hash64(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}
