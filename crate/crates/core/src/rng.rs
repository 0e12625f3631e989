//! Counter-based random streams.
//!
//! Shot `i` of a run seeded with `seed` always draws from ChaCha stream
//! `(seed, i)`, so Monte Carlo output is independent of how shots are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct ShotStreams {
    base: ChaCha8Rng,
}

impl ShotStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn stream(&self, shot: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(shot);
        rng
    }
}
