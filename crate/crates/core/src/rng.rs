//! Labelled, reproducible random streams.
//!
//! Every random choice made by the detectors comes from an [`RngStream`]
//! derived from a master seed plus a structured label (purpose tag and
//! indices). Two streams with the same seed and label produce the same
//! sequence no matter in which order or on which thread they are consumed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

// FNV-1a, so tags hash identically on every platform.
fn hash_tag(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    label: Vec<u64>,
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Root stream for a master seed.
    pub fn new(seed: u64) -> Self {
        Self::with_label(seed, Vec::new())
    }

    fn with_label(seed: u64, label: Vec<u64>) -> Self {
        let mut state = seed;
        let mut mix = splitmix64(&mut state);
        for &word in &label {
            state ^= word.wrapping_add(mix);
            mix = splitmix64(&mut state);
        }
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        RngStream {
            seed,
            label,
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    /// Independent child stream labelled by `(tag, index)`.
    ///
    /// The child depends only on the master seed and the full label path,
    /// never on how much of the parent has been consumed.
    pub fn child(&self, tag: &str, index: u64) -> RngStream {
        let mut label = self.label.clone();
        label.push(hash_tag(tag));
        label.push(index);
        Self::with_label(self.seed, label)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &[u64] {
        &self.label
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
