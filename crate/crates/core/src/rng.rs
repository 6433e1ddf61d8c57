//! Deterministic, seedable randomness.
//!
//! Everything random in this crate flows through [`SeededGenerator`], a
//! fixed algorithm that can be reimplemented bit-for-bit in any language:
//!
//! * **Seeding.** The four 64-bit words of state are the first four outputs
//!   of SplitMix64 started at `seed`:
//!
//!   ```text
//!   z  = (x += 0x9E3779B97F4A7C15)
//!   z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!   z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!   out = z ^ (z >> 31)
//!   ```
//!
//! * **Recurrence.** xoshiro256** (Blackman & Vigna, public domain):
//!
//!   ```text
//!   result = rotl(s1 * 5, 7) * 9
//!   t = s1 << 17
//!   s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3
//!   s2 ^= t;  s3 = rotl(s3, 45)
//!   ```
//!
//! * **Integer ranges.** `below(n)` uses Lemire's multiply-and-reject: take
//!   `m = x * n` as a 128-bit product, reject while `low64(m) < (2^64 - n) mod n`,
//!   return `high64(m)`. No modulo bias.
//!
//! * **Unit reals.** `(x >> 11) * 2^-53`, in `[0, 1)`.
//!
//! * **Substreams.** `substream(seed, index)` seeds a fresh generator with
//!   `mix(seed + mix(index + 0x9E3779B97F4A7C15))` where `mix` is the
//!   SplitMix64 finalizer above. `mix` is a bijection, so distinct indices
//!   give distinct seeds for a fixed `seed`.
//!
//! All arithmetic is wrapping, modulo 2^64.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seeded xoshiro256** generator. Single owner; clone to fork a copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededGenerator {
    seed: u64,
    state: [u64; 4],
}

impl SeededGenerator {
    pub fn new(seed: u64) -> Self {
        let mut x = seed;
        let mut state = [0u64; 4];
        for word in &mut state {
            x = x.wrapping_add(GOLDEN_GAMMA);
            *word = mix64(x);
        }
        // SplitMix64 never yields four zero words in a row, so the
        // all-zero fixed point of xoshiro is unreachable.
        Self { seed, state }
    }

    /// Independent generator for one replicate of a seeded run.
    ///
    /// A pure function of `(seed, index)`: it does not matter how many other
    /// substreams were created before.
    pub fn substream(seed: u64, index: u64) -> Self {
        let derived = mix64(seed.wrapping_add(mix64(index.wrapping_add(GOLDEN_GAMMA))));
        let mut generator = Self::new(derived);
        generator.seed = seed;
        generator
    }

    /// The user-facing seed this generator was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no valid output");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = u128::from(self.next_u64()) * u128::from(n);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    #[inline]
    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    /// In-place Fisher–Yates shuffle (high index down to 1).
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    /// Moves a uniformly random `k`-subset, in uniformly random order, into
    /// `items[..k]` (partial Fisher–Yates, low index up). `k` is clamped to
    /// the slice length.
    pub fn partial_shuffle<T>(&mut self, items: &mut [T], k: usize) {
        let n = items.len();
        for i in 0..k.min(n.saturating_sub(1)) {
            let j = i + self.index(n - i);
            items.swap(i, j);
        }
    }

    /// `k` independent uniform draws from `items`.
    pub fn draw_with_replacement<T: Clone>(&mut self, items: &[T], k: usize) -> Result<Vec<T>, crate::Error> {
        if items.is_empty() {
            return Err(crate::Error::EmptyData("draw_with_replacement"));
        }
        Ok((0..k).map(|_| items[self.index(items.len())].clone()).collect())
    }

    /// Draw positions (indices into a collection of length `len`), with
    /// replacement, into `out`.
    pub fn fill_indices(&mut self, len: usize, out: &mut [usize]) {
        for slot in out {
            *slot = self.index(len);
        }
    }
}

/// Returns a shuffled copy of `items`.
pub fn shuffle<T: Clone>(generator: &mut SeededGenerator, items: &[T]) -> Vec<T> {
    let mut out = items.to_vec();
    generator.shuffle(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values for the first outputs of splitmix64 seeded with 0,
    // as published with the algorithm.
    #[test]
    fn splitmix_reference_vector() {
        let mut x = 0u64;
        let mut next = || {
            x = x.wrapping_add(GOLDEN_GAMMA);
            mix64(x)
        };
        assert_eq!(next(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(next(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(next(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededGenerator::new(42);
        let mut b = SeededGenerator::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn substreams_are_stateless_and_distinct() {
        let first: Vec<u64> = {
            let mut g = SeededGenerator::substream(7, 3);
            (0..4).map(|_| g.next_u64()).collect()
        };
        // Consume a pile of other substreams in between.
        for i in 0..50 {
            let mut g = SeededGenerator::substream(7, i);
            g.next_u64();
        }
        let again: Vec<u64> = {
            let mut g = SeededGenerator::substream(7, 3);
            (0..4).map(|_| g.next_u64()).collect()
        };
        assert_eq!(first, again);

        let mut s0 = SeededGenerator::substream(0, 0);
        let mut s1 = SeededGenerator::substream(0, 1);
        for _ in 0..4 {
            assert_ne!(s0.next_u64(), s1.next_u64());
        }
    }

    #[test]
    fn shuffle_edge_cases() {
        let mut g = SeededGenerator::new(0);
        let empty: Vec<i32> = vec![];
        assert_eq!(shuffle(&mut g, &empty), empty);
        assert_eq!(shuffle(&mut g, &[9]), vec![9]);
    }

    #[test]
    fn shuffle_orders_of_three_are_uniform() {
        let mut g = SeededGenerator::new(0);
        let mut counts = std::collections::HashMap::new();
        let trials = 20_000;
        for _ in 0..trials {
            *counts.entry(shuffle(&mut g, &[1, 2, 3])).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        let mut chi2 = 0.0;
        let expected = trials as f64 / 6.0;
        for &c in counts.values() {
            let freq = f64::from(c) / trials as f64;
            assert!((freq - 1.0 / 6.0).abs() < 0.02, "frequency {freq}");
            chi2 += (f64::from(c) - expected).powi(2) / expected;
        }
        // 99.9th percentile of chi-square with 5 degrees of freedom.
        assert!(chi2 < 20.515, "chi2 = {chi2}");
    }

    #[test]
    fn single_draws_are_uniform_over_nine() {
        let mut g = SeededGenerator::new(0);
        let mut counts = [0u32; 9];
        let trials = 90_000;
        for _ in 0..trials {
            counts[g.index(9)] += 1;
        }
        for c in counts {
            let freq = f64::from(c) / trials as f64;
            assert!((freq - 1.0 / 9.0).abs() < 0.01, "frequency {freq}");
        }
    }

    #[test]
    fn draw_from_singleton_and_empty() {
        let mut g = SeededGenerator::new(1);
        assert_eq!(g.draw_with_replacement(&[4.5], 5).unwrap(), vec![4.5; 5]);
        assert!(g.draw_with_replacement::<f64>(&[], 3).is_err());
    }

    #[test]
    fn below_stays_in_range_for_awkward_bounds() {
        let mut g = SeededGenerator::new(3);
        for n in [1u64, 2, 3, 7, (1 << 63) + 1, u64::MAX] {
            for _ in 0..200 {
                assert!(g.below(n) < n);
            }
        }
    }

    #[test]
    fn unit_reals_in_half_open_interval() {
        let mut g = SeededGenerator::new(11);
        for _ in 0..10_000 {
            let u = g.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn partial_shuffle_keeps_multiset() {
        let mut g = SeededGenerator::new(5);
        let mut v: Vec<u32> = (0..20).collect();
        g.partial_shuffle(&mut v, 7);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..20).collect::<Vec<_>>());
    }
}
