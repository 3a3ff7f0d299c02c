//! Counter-based, splittable random streams.
//!
//! Every random quantity in the crate is drawn from a stream addressed by a
//! [`Seed`]: a master seed plus a 64-bit stream id. Stream ids are derived by
//! hashing a path of labels and indices (`root / "env" / j`), so the numbers a
//! task sees depend only on its address and never on which thread ran it or in
//! what order.
//!
//! The generator behind a stream is ChaCha8 keyed by the master seed, with the
//! stream id as the ChaCha nonce and the block counter as the position. Draws
//! on a stream are sequential, which makes anything generated step by step
//! (environments, walks) prefix-stable: the first `n` values of a longer run
//! equal the values of a run of length `n`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The concrete generator handed out by [`Seed::rng`].
pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// FNV-1a, fixed here so stream ids are stable across platforms and releases.
fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Address of a random stream: `(master seed, stream id)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master, stream: 0 }
    }

    /// Sub-stream named by a label.
    pub fn child(self, label: &str) -> Self {
        self.derive(label_hash(label) ^ 0x6c61_6265_6c00_0000)
    }

    /// Sub-stream named by an index.
    pub fn index(self, i: u64) -> Self {
        self.derive(i.wrapping_mul(GOLDEN) ^ 0x0000_0000_6964_7800)
    }

    fn derive(self, tag: u64) -> Self {
        let s = mix64(self.stream.wrapping_add(GOLDEN) ^ mix64(tag));
        Seed {
            master: self.master,
            stream: mix64(s.wrapping_add(tag.rotate_left(17))),
        }
    }

    pub fn as_tuple(self) -> (u64, u64) {
        (self.master, self.stream)
    }

    /// A fresh generator positioned at counter 0 of this stream.
    pub fn rng(self) -> StreamRng {
        let mut key = [0u8; 32];
        let mut z = self.master;
        for chunk in key.chunks_exact_mut(8) {
            z = z.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(z).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_address_same_numbers() {
        let s = Seed::new(7).child("env").index(3);
        let a: Vec<u64> = s.rng().random_iter().take(16).collect();
        let b: Vec<u64> = s.rng().random_iter().take(16).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn siblings_differ() {
        let root = Seed::new(7);
        let a: u64 = root.child("env").index(0).rng().random();
        let b: u64 = root.child("env").index(1).rng().random();
        let c: u64 = root.child("walk").index(0).rng().random();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(root.child("env").stream, root.child("walk").stream);
        assert_ne!(
            Seed::new(8).rng().random::<u64>(),
            Seed::new(7).rng().random::<u64>()
        );
    }

    #[test]
    fn label_and_index_paths_do_not_alias() {
        let root = Seed::new(1);
        let mut ids: Vec<u64> = (0..10_000u64).map(|i| root.index(i).stream).collect();
        ids.extend((0..10_000u64).map(|i| root.child("walk").index(i).stream));
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 20_000);
    }

    #[test]
    fn prefix_stable() {
        let s = Seed::new(11).child("x");
        let long: Vec<f64> = s.rng().random_iter().take(100).collect();
        let short: Vec<f64> = s.rng().random_iter().take(40).collect();
        assert_eq!(&long[..40], &short[..]);
    }
}
