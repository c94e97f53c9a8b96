//! Seeded, splittable random streams.
//!
//! Every sampling routine draws from [`stream`], which keys a ChaCha8 generator
//! by `(seed, stream_id)`. Work split into blocks gets one stream per block, so
//! results do not depend on how blocks are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Environment variable consulted for the default seed.
pub const SEED_ENV: &str = "HYBRID_TELEPORT_SEED";

pub const DEFAULT_SEED: u64 = 20_210_611;

pub fn stream(seed: u64, stream_id: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Derives an independent child seed, e.g. one per input state of a suite.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the combined word
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}
