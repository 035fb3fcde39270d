//! Portable seeded random number generation.
//!
//! Masks and synthetic datasets must be reproducible bit-for-bit across
//! implementations in other languages, so the generator is pinned to
//! splitmix64 with the standard constants rather than an opaque library RNG.

/// splitmix64: state advances by 0x9E3779B97F4A7C15 per draw; the output mix
/// multiplies by 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB with xor-shifts
/// of 30, 27, and 31 bits.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `[0, bound)` via the 128-bit multiply-high
    /// reduction (fixed-point scaling; no rejection loop, so the draw count
    /// per call is always exactly one).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform f64 in `[0, 1)` from the top 53 bits.
    pub fn next_unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference outputs for seed 0 of the standard splitmix64 constants.
    #[test]
    fn matches_reference_stream() {
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn determinism_and_bounds() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            assert!(rng.next_below(13) < 13);
            let u = rng.next_unit_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
