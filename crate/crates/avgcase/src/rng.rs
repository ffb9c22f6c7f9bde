//! Deterministic, counter-based random number generation.
//!
//! Nothing in this crate may call a platform RNG. All randomness flows
//! through [`Rng`] values derived from a master seed, so every experiment is
//! reproducible bit-for-bit on every platform. Each trial of an experiment
//! derives its own substream from `(master_seed, trial_index)`, which means
//! trials can be rerun or dispatched in any order without changing results.
//!
//! The generator is SplitMix64: a 64-bit counter advanced by a fixed odd
//! increment, with a finalizing mix applied to each counter value. Output
//! quality is more than adequate for Monte Carlo work, and the counter form
//! makes substream derivation trivial.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Finalizing mix of SplitMix64 (also a decent standalone 64-bit hash).
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// A seeded deterministic generator. Single-owner: not shared across tasks.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    /// Generator producing the stream for `seed`.
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    /// Independent substream for trial `index` under `master_seed`.
    ///
    /// Distinct indices give distinct sub-seeds by construction (the index is
    /// passed through an odd-multiplier bijection before mixing), so trials
    /// never share a stream.
    pub fn substream(master_seed: u64, index: u64) -> Self {
        let sub = mix64(master_seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        Rng::new(sub)
    }

    /// The sub-seed that [`Rng::substream`] would use; recorded in experiment
    /// output so a single trial can be replayed in isolation.
    pub fn subseed(master_seed: u64, index: u64) -> u64 {
        mix64(master_seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
    }

    /// Next raw 64-bit value.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform real in `[0, 1)` built from the top 53 bits, so the value is
    /// exactly representable and identical on every platform.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in `[0, n)`. Panics if `n == 0`.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        // Rejection sampling over the largest multiple of n that fits in u64.
        let threshold = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= threshold {
                return x % n;
            }
        }
    }

    /// Uniform index in `[0, n)`.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// Bernoulli trial: true with probability `p`.
    #[inline]
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    /// A uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        self.shuffle(&mut perm);
        perm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix64_reference_vector() {
        // Published SplitMix64 outputs for seed 0 and seed 42.
        let mut r = Rng::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
        let mut r = Rng::new(42);
        assert_eq!(r.next_u64(), 0xBDD7_3226_2FEB_6E95);
        assert_eq!(r.next_u64(), 0x28EF_E333_B266_F103);
        assert_eq!(r.next_u64(), 0x4752_6757_130F_9F52);
    }

    #[test]
    fn f64_is_53_bit_construction() {
        let mut r = Rng::new(0);
        // (0xE220A8397B1DCDAF >> 11) * 2^-53, computed independently.
        assert_eq!(r.next_f64(), 0.8833108082136426);
        let mut r = Rng::new(7);
        for _ in 0..10_000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(123);
        let mut b = Rng::new(123);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn substreams_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..1000 {
            let mut r = Rng::substream(99, i);
            assert!(seen.insert(r.next_u64()), "substream {i} collides");
        }
    }

    #[test]
    fn below_is_in_range_and_roughly_uniform() {
        let mut r = Rng::new(5);
        let mut counts = [0u32; 10];
        for _ in 0..100_000 {
            counts[r.below(10) as usize] += 1;
        }
        for &c in &counts {
            // 100k draws over 10 buckets: mean 10k, sd ~95.
            assert!((9_500..10_500).contains(&c), "bucket count {c}");
        }
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut r = Rng::new(11);
        let mut v: Vec<usize> = (0..100).collect();
        r.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }
}
