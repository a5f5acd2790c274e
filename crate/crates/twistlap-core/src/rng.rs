//! Seeded pseudo-random probe vectors.
//!
//! Every random quantity in the crate (Lanczos start vectors, Hermiticity and
//! Weitzenböck probe vectors, random gauges in tests) is drawn from a ChaCha8
//! stream keyed by an explicit `u64` seed, so results are reproducible
//! bit-for-bit across runs and platforms.

use alloc::vec::Vec;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic generator of uniform reals and complex vectors.
#[derive(Debug, Clone)]
pub struct ProbeRng {
    inner: ChaCha8Rng,
}

impl ProbeRng {
    /// Creates a generator from a seed.
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Creates a generator for a sub-stream of `seed`; distinct `stream`
    /// values give independent sequences.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    /// Uniform sample in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform sample in `[-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Complex vector with real and imaginary parts uniform in `[-1, 1)`.
    pub fn complex_vector(&mut self, len: usize) -> Vec<Complex64> {
        (0..len)
            .map(|_| {
                let re = self.symmetric();
                let im = self.symmetric();
                Complex64::new(re, im)
            })
            .collect()
    }

    /// Complex vector normalized to unit Euclidean norm.
    pub fn unit_vector(&mut self, len: usize) -> Vec<Complex64> {
        let mut v = self.complex_vector(len);
        let n = crate::sparse::norm(&v);
        if n > 0.0 {
            crate::sparse::scale(&mut v, 1.0 / n);
        }
        v
    }
}
