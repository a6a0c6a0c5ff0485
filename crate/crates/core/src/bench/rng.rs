//! SplitMix64, chosen because it is tiny and has published reference output,
//! so any port can reproduce a benchmark stream bit for bit.
//!
//! Step: `state += 0x9E3779B97F4A7C15`, then
//! `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`,
//! `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`, output `z ^ (z >> 31)`.
//! Uniform reals take the top 53 bits; normals use Box–Muller.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for item `index` of a run seeded with `seed`: the
    /// parent's `index`-th output, computed without advancing anything.
    pub fn stream(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = hi - lo + 1;
        // floor of a uniform real keeps the mapping portable
        lo + ((self.uniform() * span as f64) as u64).min(span - 1)
    }

    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        mean + sd * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Normal sample resampled until it lands in `[lo, hi]`, clamped after
    /// 100 attempts.
    pub fn truncated_normal(&mut self, mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
        let mut x = mean;
        for _ in 0..100 {
            x = self.normal(mean, sd);
            if x >= lo && x <= hi {
                return x;
            }
        }
        x.clamp(lo, hi)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.int_in(0, i as u64) as usize;
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_vectors() {
        let mut r = SplitMix64::new(0);
        let got: Vec<u64> = (0..4).map(|_| r.next_u64()).collect();
        assert_eq!(
            got,
            [0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f, 0xf88bb8a8724c81ec]
        );
        let mut r = SplitMix64::new(42);
        let got: Vec<u64> = (0..4).map(|_| r.next_u64()).collect();
        assert_eq!(
            got,
            [0xbdd732262feb6e95, 0x28efe333b266f103, 0x47526757130f9f52, 0x581ce1ff0e4ae394]
        );
    }

    #[test]
    fn stream_matches_parent_outputs() {
        let mut parent = SplitMix64::new(7);
        for index in 0..5 {
            let expected = parent.next_u64();
            assert_eq!(SplitMix64::stream(7, index), SplitMix64::new(expected));
        }
    }

    #[test]
    fn ranges() {
        let mut r = SplitMix64::new(1);
        for _ in 0..10_000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
            let k = r.int_in(3, 5);
            assert!((3..=5).contains(&k));
            let t = r.truncated_normal(8.0, 3.0, 0.0, f64::INFINITY);
            assert!(t >= 0.0);
        }
    }
}
