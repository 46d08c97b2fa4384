//! The simulation random stream.
//!
//! Runs use ChaCha8, a counter-based generator whose output is fixed by
//! its published algorithm, so a seed reproduces the same trace on every
//! platform and build. Independent runs get independent streams through
//! the ChaCha stream id.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Recorded in every run manifest.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64, stream 0)";

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A stream that does not overlap the default stream for the same seed.
pub fn seeded_stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
