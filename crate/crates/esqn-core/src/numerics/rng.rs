//! Deterministic seeded random generation.
//!
//! The generator is xoshiro256++ with its state filled from SplitMix64, so
//! identical seeds give identical draw sequences on every platform (integer
//! arithmetic only). Independent sub-streams are derived by hashing a label
//! into the seed; a run forks one stream per component (reservoir init,
//! readout init, epsilon-greedy, replay sampling, environment init) so a
//! change in one component's draw count cannot shift the others.

/// SplitMix64 step; also used to mix seeds for sub-streams.
#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// FNV-1a over a label, used only to derive sub-stream seeds.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF29CE484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001B3);
    }
    h
}

/// xoshiro256++ generator with a recorded seed.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    s: [u64; 4],
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        SeededRng { seed, s }
    }

    /// Seed this generator was created from (forked streams report their
    /// derived seed).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent sub-stream for a named run component. Derivation is
    /// `splitmix64(seed ^ fnv1a(label))`, so the same `(seed, label)` pair
    /// always yields the same stream.
    pub fn substream(seed: u64, label: &str) -> SeededRng {
        let mut mix = seed ^ fnv1a(label.as_bytes());
        SeededRng::new(splitmix64(&mut mix))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Unbiased uniform integer in `[0, n)`, by rejection on a bitmask.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let mask = u64::MAX >> (n - 1).leading_zeros().min(63);
        loop {
            let v = self.next_u64() & mask;
            if v < n {
                return v as usize;
            }
        }
    }
}
