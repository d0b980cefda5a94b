//! Seeded random streams.
//!
//! Every stochastic input is drawn from a ChaCha8 stream whose 64-bit seed is
//! derived from `(base seed, run index, stream tag)`. Wind and wave use
//! separate tags, so resampling one leaves the other untouched.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Algorithm name written into manifests.
pub const ALGORITHM: &str = "ChaCha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Wind,
    Wave,
}

impl Stream {
    pub const fn tag(self) -> u64 {
        match self {
            Stream::Wind => 0x5749_4e44, // "WIND"
            Stream::Wave => 0x5741_5645, // "WAVE"
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-run stream seed.
pub fn hash64(base: u64, index: u64, tag: u64) -> u64 {
    splitmix(splitmix(splitmix(base) ^ index) ^ tag)
}

pub fn stream_seed(base: u64, index: u64, stream: Stream) -> u64 {
    hash64(base, index, stream.tag())
}

/// Uniform `[0, 1)` doubles from a ChaCha8 stream.
pub struct UniformStream(ChaCha8Rng);

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
