//! Counter-based keyed randomness.
//!
//! Every random decision is a pure function of `(base_seed, stream_id,
//! domain, key)`, so results do not depend on iteration order or on how work
//! is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SeedSpec {
    pub base_seed: u64,
    pub stream_id: u64,
}

/// Separates the random streams used by different operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Domain {
    Bernoulli = 0x6265_726e,
    Sparsify = 0x7370_6172,
    Hyperedge = 0x6879_7065,
    BernoulliSkip = 0x736b_6970,
    PowerRestart = 0x706f_7772,
    HopmRestart = 0x686f_706d,
    Slices = 0x736c_6963,
    Families = 0x6661_6d69,
}

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeedSpec {
    pub fn new(base_seed: u64, stream_id: u64) -> Self {
        Self { base_seed, stream_id }
    }

    #[inline]
    pub(crate) fn key(&self, domain: Domain) -> u64 {
        splitmix(splitmix(splitmix(self.base_seed) ^ self.stream_id) ^ domain as u64)
    }

    /// Sub-stream for a nested consumer (restart index, trial, ...).
    pub fn child(&self, salt: u64) -> SeedSpec {
        SeedSpec { base_seed: splitmix(self.base_seed ^ splitmix(self.stream_id)), stream_id: salt }
    }

    pub(crate) fn rng(&self, domain: Domain, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(splitmix(self.key(domain) ^ splitmix(salt)))
    }
}

/// Uniform in `[0, 1)` determined by `key` and a coordinate tuple.
#[inline]
pub(crate) fn keyed_uniform(key: u64, coord: &[u32]) -> f64 {
    let mut h = key;
    for &c in coord {
        h = splitmix(h ^ c as u64);
    }
    (splitmix(h) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
