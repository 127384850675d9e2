//! Deterministic sub-seeding and portable random streams.
//!
//! Every randomized operation in this crate draws from a [`SeedStream`]
//! keyed by a master seed plus a list of context words (configuration
//! index, repetition index, trial index, role tags). The mixing function
//! and the generator are both SplitMix64, so the same `(seed, context)`
//! pair produces the same stream on every platform and in every run,
//! independent of how many other streams exist or in which order they
//! are consumed. Extending an experiment with new configurations or
//! trials never perturbs the streams of existing ones.

/// One step of the SplitMix64 mixer: advances `state` and returns the
/// mixed output word.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a sub-seed from a master seed and a list of context words.
///
/// The words are folded into the state one at a time, each followed by a
/// SplitMix64 step, so `(a, b)` and `(b, a)` yield unrelated seeds.
pub fn sub_seed(master: u64, context: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &word in context {
        state ^= word;
        out = splitmix64(&mut state);
    }
    out
}

/// FNV-1a hash of a label, used to key per-class streams portably.
pub fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for byte in label.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// A deterministic random stream.
///
/// Draw order is part of the contract: callers that document their draw
/// sequence get reproducible results for as long as that sequence is
/// kept stable.
#[derive(Debug, Clone)]
pub struct SeedStream {
    state: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Stream keyed by `(master, context)` via [`sub_seed`].
    pub fn for_context(master: u64, context: &[u64]) -> Self {
        Self::new(sub_seed(master, context))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        splitmix64(&mut self.state)
    }

    /// Uniform draw from `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli draw with success probability `p`.
    #[inline]
    pub fn next_bool(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Unbiased draw from `[0, bound)` (Lemire rejection).
    pub fn next_bounded(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let mut x = self.next_u64();
        let mut m = u128::from(x) * u128::from(bound);
        let mut low = m as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                x = self.next_u64();
                m = u128::from(x) * u128::from(bound);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Standard normal draw (Marsaglia polar method; the second variate
    /// of each accepted pair is discarded to keep the stream simple).
    pub fn next_normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Fisher-Yates shuffle of the first `take` positions; the remainder
    /// of the slice holds the undrawn elements in unspecified order.
    pub fn partial_shuffle<T>(&mut self, items: &mut [T], take: usize) {
        let n = items.len();
        let take = take.min(n);
        for i in 0..take {
            let j = i + self.next_bounded((n - i) as u64) as usize;
            items.swap(i, j);
        }
    }

    /// Draws `take` indices from `0..n` without replacement.
    pub fn sample_indices(&mut self, n: usize, take: usize) -> Vec<usize> {
        let mut indices: Vec<usize> = (0..n).collect();
        self.partial_shuffle(&mut indices, take);
        indices.truncate(take);
        indices
    }
}
