//! Seeded, splittable randomness.
//!
//! Every random choice in the crate draws from a ChaCha stream identified by
//! a `(seed, stream)` pair, so independent sub-tasks of one run never share
//! a generator and every run is reproducible from its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Generator for stream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws a fresh child seed from `rng`.
pub fn split(rng: &mut SimRng) -> u64 {
    rng.random()
}

/// Two-outcome sampling rule shared by every measurement: outcome 0 iff a
/// uniform draw falls below `prob0`.
pub(crate) fn sample_binary(prob0: f64, rng: &mut SimRng) -> u8 {
    let r: f64 = rng.random();
    if r < prob0 {
        0
    } else {
        1
    }
}
