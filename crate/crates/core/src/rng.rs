//! Seeded random streams.
//!
//! Every replicate draws from its own ChaCha8 stream keyed by `(seed, index)`,
//! so ensembles are reproducible and do not depend on how work is scheduled
//! across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn stream(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stream driving the dynamics of replicate `replicate`.
pub fn dynamics_stream(seed: u64, replicate: u64) -> SimRng {
    stream(seed, replicate.wrapping_mul(2))
}

/// Stream used to draw the initial configuration of replicate `replicate`.
pub fn initial_stream(seed: u64, replicate: u64) -> SimRng {
    stream(seed, replicate.wrapping_mul(2).wrapping_add(1))
}
