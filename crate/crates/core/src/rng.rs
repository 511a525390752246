//! Seed handling.
//!
//! All randomness is derived from a 64-bit [`RandomSeed`]. Sequential samplers
//! seed a ChaCha8 stream from it; per-pair samplers hash `(seed, tag, i, j)`
//! through the SplitMix64 finalizer so the outcome for a pair never depends on
//! the order pairs are visited in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    pub const fn new(seed: u64) -> Self {
        RandomSeed(seed)
    }

    /// Derive an independent child seed for a labelled sub-stream.
    pub fn derive(self, stream: u64) -> RandomSeed {
        RandomSeed(mix64(mix64(self.0 ^ 0x6a09_e667_f3bc_c909).wrapping_add(stream)))
    }

    /// A ChaCha8 generator for sequential sampling.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Order-independent uniform draw in `[0, 1)` for the unordered pair
    /// `{i, j}` on sub-stream `tag`.
    pub fn pair_uniform(self, tag: u64, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let h = mix64(mix64(mix64(self.0 ^ mix64(tag)) ^ a as u64) ^ (b as u64).rotate_left(32));
        to_unit(h)
    }
}

impl From<u64> for RandomSeed {
    fn from(v: u64) -> Self {
        RandomSeed(v)
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn to_unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
