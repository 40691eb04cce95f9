//! Portable deterministic PRNG.
//!
//! Training, shuffling and sampling all draw from xoshiro256** (Blackman &
//! Vigna), seeded through splitmix64. The algorithm is fixed so that shuffles,
//! parameter initialization and sampling reproduce bit-for-bit across
//! platforms, and the full state is four `u64` words that serialize directly
//! into checkpoints.

/// xoshiro256** generator with a 256-bit state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    state: [u64; 4],
}

impl Rng {
    /// Seeds the state by running splitmix64 four times over `seed`.
    /// A zero seed is fine; splitmix64 never yields the all-zero state.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = seed;
        let mut state = [0u64; 4];
        for word in &mut state {
            sm = sm.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            *word = z ^ (z >> 31);
        }
        Rng { state }
    }

    /// Restores a generator from a previously captured state.
    pub fn from_state(state: [u64; 4]) -> Self {
        Rng { state }
    }

    /// Captures the current state for checkpointing.
    pub fn state(&self) -> [u64; 4] {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.state[1]
            .wrapping_mul(5)
            .rotate_left(7)
            .wrapping_mul(9);
        let t = self.state[1] << 17;
        self.state[2] ^= self.state[0];
        self.state[3] ^= self.state[1];
        self.state[1] ^= self.state[2];
        self.state[0] ^= self.state[3];
        self.state[2] ^= t;
        self.state[3] = self.state[3].rotate_left(45);
        result
    }

    /// Uniform f64 in [0, 1) from the top 53 bits of one draw.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform f64 in (-s, s).
    pub fn next_uniform(&mut self, s: f64) -> f64 {
        (2.0 * self.next_f64() - 1.0) * s
    }

    /// Uniform integer in [0, bound) via rejection sampling, so the result
    /// is unbiased and identical on every platform. `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
