//! Seed handling.
//!
//! All randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`). A
//! [`Seeds`] value wraps a 64-bit master seed. Run `k` of an experiment draws
//! from `ChaCha20Rng::seed_from_u64(master)` with its stream id set to `k`,
//! so the draws of run `k` never depend on how many runs come after it.
//! Independent sub-experiments use [`Seeds::child`], which mixes the master
//! seed with the child index through SplitMix64.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Rng = ChaCha20Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeds {
    master: u64,
}

impl Seeds {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Generator for run number `counter`.
    pub fn stream(&self, counter: u64) -> Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master);
        rng.set_stream(counter);
        rng
    }

    /// Seed family for an independent sub-experiment.
    pub fn child(&self, index: u64) -> Seeds {
        Seeds::new(splitmix64(
            self.master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15),
        ))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
