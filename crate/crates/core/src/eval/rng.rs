//! Portable seeded shuffling.
//!
//! The generator is xoshiro256++ seeded from a `u64` through SplitMix64
//! (increment `0x9e3779b97f4a7c15`, mixers `0xbf58476d1ce4e5b9` and
//! `0x94d049bb133111eb`, shifts 30/27/31), as in the reference implementation.
//! A bounded draw in `[0, m)` is the high 64 bits of `next_u64() * m`
//! (128-bit product). Shuffles are Fisher-Yates from the back: for
//! `i = len-1 .. 1`, swap `i` with a draw in `[0, i]`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub struct SplitRng(Xoshiro256PlusPlus);

impl SplitRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish draw in `[0, bound)`; `bound` must be nonzero.
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Uniform float in `[0, 1)` from the top 53 bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
