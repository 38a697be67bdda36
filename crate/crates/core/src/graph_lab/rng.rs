//! Random streams.
//!
//! Every random draw comes from ChaCha8 seeded by a 64-bit seed, with a
//! fixed stream number per purpose. Per-trial seeds are derived from a master
//! seed and the trial index with a SplitMix64 finaliser, so a trial's
//! randomness does not depend on which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream for sampling `G(n, p)`.
pub const GNP_STREAM: u64 = 0;
/// Stream for greedy tie-breaking orders.
pub const GREEDY_STREAM: u64 = 1;
/// Stream for the peeling colouring's restarts.
pub const PEEL_STREAM: u64 = 2;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// ChaCha8 seeded from `seed` on the given stream.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
