use std::f64::consts::TAU;

use crate::error::{NavError, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 output mixer applied to an already-advanced state.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Portable splitmix64 stream. Every stochastic routine in the crate draws
/// from one of these so runs are reproducible bit-for-bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    /// Independent stream for sub-task `index` keyed by `key`:
    /// seeded with splitmix64(key XOR index).
    pub fn substream(key: u64, index: u64) -> Self {
        RngStream::new(mix64((key ^ index).wrapping_add(GOLDEN_GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0, n). `n` must be nonzero.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Normal draw via Box-Muller. Two uniforms are consumed even when
    /// `std == 0`, so the stream position does not depend on noise levels.
    pub fn gaussian(&mut self, mean: f64, std: f64) -> Result<f64> {
        if !(std >= 0.0) {
            return Err(NavError::invalid(format!("standard deviation {std} < 0")));
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        if std == 0.0 {
            return Ok(mean);
        }
        Ok(mean + std * box_muller(u1, u2))
    }
}

/// Standard normal from u1 in (0, 1] and u2 in [0, 1).
#[inline]
pub fn box_muller(u1: f64, u2: f64) -> f64 {
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Free-function form of [`RngStream::gaussian`].
pub fn sample_gaussian(rng: &mut RngStream, mean: f64, std: f64) -> Result<f64> {
    rng.gaussian(mean, std)
}
