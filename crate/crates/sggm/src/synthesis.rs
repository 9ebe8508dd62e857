//! Forward sampling: prior draws of the field and noisy observations.
//!
//! Prior draws are built in the spectral domain mode by mode, then carried to
//! pixels by one inverse transform. Self-conjugate modes (DC, and the Nyquist
//! lines of even lattices) take a real Gaussian with the full mode variance;
//! every other mode is drawn once at its canonical index as a complex
//! Gaussian with the variance split equally between real and imaginary
//! parts, and mirrored to its partner by conjugation. This is the unique
//! split that keeps the pixel field real while giving every mode its
//! prescribed second moment.

use crate::model::Hyperparams;
use crate::spectral::{inverse_dft, lambda, LatticeSize, PixelField, SpectralField};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SynthesisError {
    #[error("noise standard deviation must be positive and finite, got {0}")]
    InvalidSigma(f64),
}

/// Additive white Gaussian channel strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    sigma: f64,
}

impl NoiseSpec {
    pub fn new(sigma: f64) -> Result<Self, SynthesisError> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(SynthesisError::InvalidSigma(sigma));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(self) -> f64 {
        self.sigma
    }

    /// Noise precision, the reciprocal of the pixel variance.
    pub fn precision(self) -> f64 {
        1.0 / (self.sigma * self.sigma)
    }
}

/// Identifier of the generator family; recorded in output metadata so runs
/// can be reproduced outside this crate.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Number of per-draw sub-streams reserved for distinct tasks.
const STREAMS_PER_DRAW: u64 = 4;
const TASK_PRIOR: u64 = 0;
const TASK_NOISE: u64 = 1;

/// Reproducible randomness source: a root seed plus a draw index. Distinct
/// draws and distinct tasks land on distinct ChaCha streams, so fields of a
/// Monte-Carlo batch are independent yet individually re-derivable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededRng {
    seed: u64,
    draw: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, draw: 0 }
    }

    pub fn with_draw(seed: u64, draw: u64) -> Self {
        Self { seed, draw }
    }

    pub fn seed(self) -> u64 {
        self.seed
    }

    pub fn draw(self) -> u64 {
        self.draw
    }

    pub fn algorithm(self) -> &'static str {
        RNG_ALGORITHM
    }

    fn stream(self, task: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.draw.wrapping_mul(STREAMS_PER_DRAW).wrapping_add(task));
        rng
    }
}

/// Draws one field from the smoothness prior. The noise weight of `h` plays
/// no part here; only the smoothness and ridge weights shape the spectrum.
pub fn sample_prior(h: Hyperparams, size: LatticeSize, rng: SeededRng) -> PixelField {
    let n = size.get();
    let mut source = rng.stream(TASK_PRIOR);
    let mut normal = || -> f64 { source.sample(StandardNormal) };
    let mut coeffs = vec![Complex64::ZERO; size.modes()];
    for k in 0..n {
        for l in 0..n {
            let idx = k * n + l;
            let partner = ((n - k) % n) * n + (n - l) % n;
            if partner < idx {
                // Filled by conjugation when the canonical index was visited.
                continue;
            }
            let variance = 1.0 / (h.gamma() + h.alpha() * lambda(k as i64, l as i64, size));
            if partner == idx {
                coeffs[idx] = Complex64::new(normal() * variance.sqrt(), 0.0);
            } else {
                let part = (variance / 2.0).sqrt();
                let z = Complex64::new(normal() * part, normal() * part);
                coeffs[idx] = z;
                coeffs[partner] = z.conj();
            }
        }
    }
    let spectrum = SpectralField::from_coeffs(size, coeffs).expect("mode count matches size");
    debug_assert!(spectrum.hermitian());
    inverse_dft(&spectrum).field
}

/// Passes a field through the additive white Gaussian channel.
pub fn degrade(f: &PixelField, noise: NoiseSpec, rng: SeededRng) -> PixelField {
    let mut source = rng.stream(TASK_NOISE);
    let sigma = noise.sigma();
    let values = f
        .values()
        .iter()
        .map(|v| v + sigma * source.sample::<f64, _>(StandardNormal))
        .collect();
    PixelField::from_values(f.size(), values).expect("same length as input")
}
