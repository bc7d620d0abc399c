//! Reproducible random streams.
//!
//! Every random draw in the simulator comes from a ChaCha8 generator keyed by
//! a 64-bit seed and a 64-bit stream index. Parallel Monte-Carlo trials use
//! disjoint stream indices, so their results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Stream `offset` positions after this one, for trial `i` of a batch.
    pub fn nth(&self, offset: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(offset),
        }
    }
}

/// Derive an independent seed for a named stage (device trials, spin
/// updates, sweep order, ...) from a run's master seed.
pub fn stage_seed(master: u64, stage: &str) -> u64 {
    let mut h = master ^ 0x9E37_79B9_7F4A_7C15;
    for b in stage.bytes() {
        h = splitmix64(h ^ u64::from(b));
    }
    splitmix64(h)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
