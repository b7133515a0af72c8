//! SplitMix64 and the integer-sampling conventions built on it.
//!
//! Everything random in this crate goes through this module so results can
//! be reproduced bit for bit by another implementation:
//!
//! * **Generator.** SplitMix64: `state += 0x9E3779B97F4A7C15`, then
//!   `z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//!   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)`
//!   (all arithmetic wrapping mod 2^64). The seed is the initial state.
//! * **Bounded integers.** `below(b)` uses Lemire's multiply-shift with
//!   rejection: take `m = x * b` as a 128-bit product; if the low 64 bits
//!   are below `(2^64 - b) mod b`, draw again; return the high 64 bits.
//! * **Substreams.** Stream `i` of seed `s` is SplitMix64 seeded with the
//!   `(i + 1)`-th output of SplitMix64 seeded with `s`, i.e.
//!   `mix(s + (i + 1) * 0x9E3779B97F4A7C15)`.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent substream `index` of `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA))))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform integer in `0..bound`. Panics if `bound == 0`.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let mut m = self.next_u64() as u128 * bound as u128;
        if (m as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (m as u64) < threshold {
                m = self.next_u64() as u128 * bound as u128;
            }
        }
        (m >> 64) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_outputs() {
        // Published SplitMix64 outputs for seed 1234567.
        let mut g = SplitMix64::new(1234567);
        let expected = [
            6457827717110365317u64,
            3203168211198807973,
            9817491932198370423,
            4593380528125082431,
            16408922859458223821,
        ];
        for e in expected {
            assert_eq!(g.next_u64(), e);
        }
    }

    #[test]
    fn substreams_are_master_outputs() {
        let mut master = SplitMix64::new(42);
        for i in 0..4 {
            let seed = master.next_u64();
            assert_eq!(SplitMix64::substream(42, i), SplitMix64::new(seed));
        }
    }

    #[test]
    fn below_stays_in_range_and_covers() {
        let mut g = SplitMix64::new(7);
        let mut seen = [0u32; 6];
        for _ in 0..6000 {
            let x = g.below(6);
            seen[x as usize] += 1;
        }
        assert!(seen.iter().all(|&c| (850..1150).contains(&c)), "{seen:?}");
        assert_eq!(g.below(1), 0);
    }
}
