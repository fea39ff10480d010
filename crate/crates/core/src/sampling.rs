//! Reproducible random streams.
//!
//! Every stream is identified by its lineage: a 64-bit master seed plus an
//! ordered path of integer labels. The generator key is a pure function of
//! the lineage, so a child stream never depends on how far its parent has
//! been advanced, and a sweep can hand substreams to tasks in any order.
//!
//! Label conventions used throughout the crate:
//!
//! | label   | ingredient          |
//! |---------|---------------------|
//! | `0`     | graph topology      |
//! | `1`     | natural frequencies |
//! | `2`     | initial phases      |
//! | `3 + k` | replicate `k`       |

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const LABEL_TOPOLOGY: u64 = 0;
pub const LABEL_FREQUENCIES: u64 = 1;
pub const LABEL_PHASES: u64 = 2;

/// Label of the substream owned by replicate `rep`.
pub const fn replicate_label(rep: usize) -> u64 {
    3 + rep as u64
}

/// Default master seed for the command-line tools.
pub const DEFAULT_SEED: u64 = 12345;

/// A single-owner random stream with a recorded lineage.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    path: Vec<u64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn lineage_key(seed: u64, path: &[u64]) -> [u8; 32] {
    let mut h = splitmix64(seed);
    for &label in path {
        h = splitmix64(h ^ splitmix64(label ^ 0xD6E8_FEB8_6659_FD93));
        h = splitmix64(h.rotate_left(17));
    }
    // path length keeps [] and [0] apart
    h = splitmix64(h ^ path.len() as u64);
    let mut key = [0u8; 32];
    let mut state = h;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    key
}

impl RngStream {
    /// Root stream for a master seed.
    pub fn new(seed: u64) -> Self {
        Self::from_lineage(seed, Vec::new())
    }

    fn from_lineage(seed: u64, path: Vec<u64>) -> Self {
        let rng = ChaCha8Rng::from_seed(lineage_key(seed, &path));
        Self { rng, seed, path }
    }

    /// Child stream labelled `label`. The parent is not advanced.
    pub fn derive(&self, label: u64) -> Self {
        let mut path = self.path.clone();
        path.push(label);
        Self::from_lineage(self.seed, path)
    }

    /// Child stream for a path of labels, equivalent to chained [`derive`](Self::derive) calls.
    pub fn derive_path(&self, labels: &[u64]) -> Self {
        let mut path = self.path.clone();
        path.extend_from_slice(labels);
        Self::from_lineage(self.seed, path)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Lineage as `[seed; l1, l2, ...]`.
    pub fn lineage(&self) -> String {
        let labels: Vec<String> = self.path.iter().map(u64::to_string).collect();
        format!("[{}; {}]", self.seed, labels.join(", "))
    }

    /// Uniform draw on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw on `[lo, hi)`; the degenerate interval `lo == hi` returns `lo`.
    pub fn sample_uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidRange { lo, hi });
        }
        let u = self.next_f64();
        if lo == hi {
            return Ok(lo);
        }
        let x = lo + (hi - lo) * u;
        Ok(if x >= hi { hi.next_down() } else { x })
    }

    /// One normal deviate with the given mean and standard deviation.
    pub fn sample_normal(&mut self, mean: f64, sigma: f64) -> Result<f64> {
        if !(sigma >= 0.0) || !sigma.is_finite() || !mean.is_finite() {
            return Err(Error::param(format!(
                "normal distribution needs finite mean and sigma >= 0, got mean = {mean}, sigma = {sigma}"
            )));
        }
        let z: f64 = self.rng.sample(StandardNormal);
        Ok(mean + sigma * z)
    }
}
