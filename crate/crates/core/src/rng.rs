//! Counter-based splittable pseudo-random streams.
//!
//! Every stream is a pair `(key, counter)`. The n-th output (n = 1, 2, ...) is
//! `mix(key + n * 0x9e3779b97f4a7c15)` with wrapping arithmetic, where `mix` is
//! the SplitMix64 finalizer:
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//! z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//! z =  z ^ (z >> 31)
//! ```
//!
//! A root stream has `key = seed`, so its outputs coincide with the classic
//! SplitMix64 generator seeded with `seed`. `split(tag)` derives an
//! independent child with `key = mix(parent_key ^ mix(tag ^ 0x6a09e667f3bcc909))`
//! and counter 0. Integers in `[0, n)` are drawn by rejection: outputs
//! `>= n * floor(2^64 / n)` are discarded, the rest are reduced mod n.

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const SPLIT_SALT: u64 = 0x6a09_e667_f3bc_c909;

pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedStream {
    key: u64,
    counter: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream { key: seed, counter: 0 }
    }

    pub fn split(&self, tag: u64) -> SeedStream {
        SeedStream {
            key: mix(self.key ^ mix(tag ^ SPLIT_SALT)),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform integer in `[0, n)`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = (u64::MAX / n) * n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Uniform integer in the closed range `[lo, hi]`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        (lo as i128 + self.below(span as u64) as i128) as i64
    }

    /// Fisher-Yates, drawing `below(i + 1)` for i from the top down.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
