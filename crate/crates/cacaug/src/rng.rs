//! Deterministic, portable random number generation.
//!
//! All randomized code in this crate draws from [`SplitMix64`] (Steele,
//! Lea, Flood; the `splitmix64` reference generator). The generator is
//! fully specified by three 64-bit constants, so seeds reproduce the same
//! stream on every platform and in reimplementations in other languages.

/// SplitMix64 generator. One `u64` of state, period 2^64.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derived stream for worker `index`: the first two outputs of a
    /// generator seeded with `seed ^ index` feed a fresh state. Distinct
    /// indices give decorrelated streams while staying reproducible.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut boot = SplitMix64::new(seed ^ index.wrapping_mul(0xA0761D6478BD642F));
        let s = boot.next_u64() ^ boot.next_u64().rotate_left(32);
        SplitMix64::new(s)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` using the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0f64 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound` by reduction modulo `bound`. The modulo bias is
    /// below 2^-32 for every bound this crate uses; the simple rule is kept
    /// so other implementations can reproduce the stream exactly.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below: bound must be positive");
        self.next_u64() % bound
    }

    /// Uniform in `lo..=hi`.
    pub fn next_range(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        lo + self.next_below(hi - lo + 1)
    }

    /// Bernoulli with probability `p`.
    pub fn next_bool(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Pick an index from `0..len` (panics on empty ranges).
    pub fn pick(&mut self, len: usize) -> usize {
        self.next_below(len as u64) as usize
    }
}
