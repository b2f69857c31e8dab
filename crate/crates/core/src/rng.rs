//! Counter-based randomness.
//!
//! Every random quantity is a pure function of a key built from the run seed
//! and the index of the object it belongs to (a vertex, a vertex pair, a
//! vertex's candidate stream). Results are therefore independent of iteration
//! order and of how work is split between threads.

use serde::{Deserialize, Serialize};

/// Seed plus substream selector for position sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SampleSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl SampleSeed {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }
}

impl From<u64> for SampleSeed {
    fn from(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }
}

// Domain tags keep the key spaces of different consumers disjoint.
pub(crate) const TAG_POSITION: u64 = 0x706f_7369_7469_6f6e;
pub(crate) const TAG_PAIR: u64 = 0x7061_6972_5f65_6467;
pub(crate) const TAG_CANDIDATE: u64 = 0x6361_6e64_6964_6174;
pub(crate) const TAG_CHUNG_LU: u64 = 0x6368_756e_675f_6c75;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function; a bijection on `u64` with full avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a sequence of words into one key.
#[inline]
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(GOLDEN, |h, &w| mix64(h.wrapping_add(GOLDEN) ^ mix64(w)))
}

/// Top 53 bits as a double in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `[0, 1)` for an unordered vertex pair.
#[inline]
pub fn pair_uniform(seed: u64, i: usize, j: usize) -> f64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    unit_f64(hash_words(&[TAG_PAIR, seed, a as u64, b as u64]))
}

/// A keyed stream: output `k` is `mix(key, k)`.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(words: &[u64]) -> Self {
        Self {
            key: hash_words(words),
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let out = mix64(self.key ^ mix64(self.counter.wrapping_mul(GOLDEN)));
        self.counter += 1;
        out
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform in `(0, 1]`, safe to take the logarithm of.
    #[inline]
    pub fn next_f64_open0(&mut self) -> f64 {
        1.0 - self.next_f64()
    }
}
