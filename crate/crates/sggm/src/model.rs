//! Per-mode variances of the lattice Gaussian model and the band-limited
//! evidence objective.
//!
//! The marginal likelihood of a noisy field factorizes over spectral modes:
//! mode `(k, l)` carries prior variance `1/(gamma + alpha*lambda)` and noise
//! variance `1/beta`. The evidence objective is that log likelihood
//! restricted to a centered window and normalized by the window's mode
//! count. Evaluations against observed coefficients (empirical) and against
//! a known generative model (expected) share the same stationary points; the
//! window-volume exponent `phi` only shifts values by `phi * ln(n/N)`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::numeric::pairwise_sum;
use crate::spectral::{
    forward_dft, lambda, window, LatticeSize, PixelField, ScaleExponents, SpectralField,
    WindowedSpectrum,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("hyperparameters must be finite and strictly positive")]
    InvalidHyperparams,
    #[error("noise precision must be finite and strictly positive")]
    InvalidNoisePrecision,
    #[error("window size {n} exceeds lattice size {size}")]
    WindowTooLarge { n: usize, size: usize },
    #[error("expected {expected} power values, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("mode powers must be finite and non-negative")]
    InvalidPower,
}

/// Weights of the posterior model: smoothness `alpha`, noise precision
/// `beta`, and dc anchor `gamma`. All finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl Hyperparams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, ModelError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(alpha) && ok(beta) && ok(gamma) {
            Ok(Self { alpha, beta, gamma })
        } else {
            Err(ModelError::InvalidHyperparams)
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    pub fn gamma(self) -> f64 {
        self.gamma
    }

    pub(crate) fn ln_coords(self) -> [f64; 3] {
        [self.alpha.ln(), self.beta.ln(), self.gamma.ln()]
    }
}

/// Prior variance of one mode, `1/(gamma + alpha*lambda)`.
pub fn prior_mode_variance(h: Hyperparams, lambda: f64) -> f64 {
    1.0 / (h.gamma + h.alpha * lambda)
}

/// Marginal data variance of one mode, `1/beta + 1/(gamma + alpha*lambda)`.
pub fn marginal_mode_variance(h: Hyperparams, lambda: f64) -> f64 {
    1.0 / h.beta + prior_mode_variance(h, lambda)
}

/// Posterior-mean gain of one mode, `beta/(beta + gamma + alpha*lambda)`;
/// strictly inside `(0, 1)`.
pub fn wiener_gain(h: Hyperparams, lambda: f64) -> f64 {
    h.beta / (h.beta + h.gamma + h.alpha * lambda)
}

/// Full-lattice table of spectral powers `|F(k,l)|^2` in FFT-natural order.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    size: LatticeSize,
    power: Vec<f64>,
}

impl PowerSpectrum {
    pub fn from_spectrum(spectrum: &SpectralField) -> Self {
        Self {
            size: spectrum.size(),
            power: spectrum.coeffs().iter().map(|c| c.norm_sqr()).collect(),
        }
    }

    pub fn from_field(field: &PixelField) -> Self {
        Self::from_spectrum(&forward_dft(field))
    }

    pub fn from_values(size: LatticeSize, power: Vec<f64>) -> Result<Self, ModelError> {
        if power.len() != size.modes() {
            return Err(ModelError::SizeMismatch { expected: size.modes(), actual: power.len() });
        }
        if power.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(ModelError::InvalidPower);
        }
        Ok(Self { size, power })
    }

    pub fn size(&self) -> LatticeSize {
        self.size
    }

    pub fn values(&self) -> &[f64] {
        &self.power
    }

    /// Power at signed mode label `(k, l)`, reduced modulo `n`.
    pub fn get(&self, k: i64, l: i64) -> f64 {
        let n = self.size.get() as i64;
        let (k, l) = (k.rem_euclid(n) as usize, l.rem_euclid(n) as usize);
        self.power[k * self.size.get() + l]
    }

    /// Total spectral energy; equals the field's `sum f^2` by Parseval.
    pub fn total(&self) -> f64 {
        pairwise_sum(self.power.iter().copied())
    }

    pub fn dc(&self) -> f64 {
        self.power[0]
    }
}

/// Generative ground truth: the noise precision that produced the data and
/// the clean field's spectral powers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueModel {
    beta_star: f64,
    truth_spectrum: PowerSpectrum,
}

impl TrueModel {
    pub fn new(beta_star: f64, truth_spectrum: PowerSpectrum) -> Result<Self, ModelError> {
        if !beta_star.is_finite() || beta_star <= 0.0 {
            return Err(ModelError::InvalidNoisePrecision);
        }
        Ok(Self { beta_star, truth_spectrum })
    }

    pub fn from_truth(truth: &PixelField, beta_star: f64) -> Result<Self, ModelError> {
        Self::new(beta_star, PowerSpectrum::from_field(truth))
    }

    pub fn beta_star(&self) -> f64 {
        self.beta_star
    }

    pub fn truth_spectrum(&self) -> &PowerSpectrum {
        &self.truth_spectrum
    }

    /// Population variance of the clean pixels, computed spectrally:
    /// `(total energy - dc energy) / n^2`.
    pub fn truth_variance(&self) -> f64 {
        let spectrum = &self.truth_spectrum;
        (spectrum.total() - spectrum.dc()) / spectrum.size().modes() as f64
    }
}

/// Per-mode inputs to the evidence objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeStats {
    pub lambda: f64,
    pub data_power: f64,
}

/// Partial derivatives of the evidence objective in `(alpha, beta, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveGradient {
    pub d_alpha: f64,
    pub d_beta: f64,
    pub d_gamma: f64,
}

/// `ln(a/d)` for `d = beta + a`, stable in both the `beta << a` and the
/// `beta >> a` regime.
fn log_ratio(a: f64, d: f64, beta: f64) -> f64 {
    if beta <= a {
        (-beta / d).ln_1p()
    } else {
        (a / d).ln()
    }
}

/// Per-mode statistics cached once per data set; objective and gradient
/// evaluations are then `O(n^2)` with no further transforms.
#[derive(Debug, Clone)]
pub struct EvidenceCache {
    stats: Vec<ModeStats>,
    log_scale: f64,
}

impl EvidenceCache {
    /// Caches observed powers of a windowed spectrum. Eigenvalues are those
    /// of the source lattice, not of the window's own size.
    pub fn from_windowed(g: &WindowedSpectrum) -> Self {
        let source = g.source_size();
        let stats = g
            .iter()
            .map(|((k, l), c)| ModeStats { lambda: lambda(k, l, source), data_power: c.norm_sqr() })
            .collect();
        let log_scale = (g.window().size().get() as f64 / source.get() as f64).ln();
        Self { stats, log_scale }
    }

    /// Caches expected powers `|F*(k,l)|^2 + 1/beta*` of a generative model.
    pub fn from_true_model(tm: &TrueModel, n: LatticeSize) -> Result<Self, ModelError> {
        let big = tm.truth_spectrum().size();
        if n > big {
            return Err(ModelError::WindowTooLarge { n: n.get(), size: big.get() });
        }
        let noise = 1.0 / tm.beta_star();
        let stats = window(n)
            .indices()
            .map(|(k, l)| ModeStats {
                lambda: lambda(k, l, big),
                data_power: tm.truth_spectrum().get(k, l) + noise,
            })
            .collect();
        let log_scale = (n.get() as f64 / big.get() as f64).ln();
        Ok(Self { stats, log_scale })
    }

    /// Wraps raw per-mode statistics, treated as a full window (the `phi`
    /// offset is zero). Panics on an empty slice.
    pub fn from_stats(stats: Vec<ModeStats>) -> Self {
        assert!(!stats.is_empty(), "evidence needs at least one mode");
        Self { stats, log_scale: 0.0 }
    }

    pub fn stats(&self) -> &[ModeStats] {
        &self.stats
    }

    /// `ln(n/N)`; exactly zero for a full window.
    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Objective without the `phi` offset. Constant shifts in `phi` cannot
    /// change the maximizer, so the optimizer works on this value.
    pub fn core_value(&self, h: Hyperparams) -> f64 {
        let m = self.stats.len() as f64;
        let sum = pairwise_sum(self.stats.iter().map(|s| {
            let a = h.gamma + h.alpha * s.lambda;
            let d = h.beta + a;
            log_ratio(a, d, h.beta) - s.data_power * (h.beta * (a / d))
        }));
        0.5 * (h.beta.ln() - (2.0 * PI).ln()) + sum / (2.0 * m)
    }

    pub fn value(&self, h: Hyperparams, exponents: ScaleExponents) -> f64 {
        self.core_value(h) + exponents.phi * self.log_scale
    }

    pub fn gradient(&self, h: Hyperparams) -> ObjectiveGradient {
        objective_gradient(h, &self.stats)
    }

    /// True when every mode carries the same observed power to machine
    /// precision; the smoothness weight is then unidentifiable.
    pub fn is_flat(&self) -> bool {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in &self.stats {
            lo = lo.min(s.data_power);
            hi = hi.max(s.data_power);
        }
        hi - lo <= 8.0 * f64::EPSILON * hi.abs().max(lo.abs())
    }
}

/// Evidence of observed windowed coefficients, normalized per mode.
pub fn empirical_objective(h: Hyperparams, g: &WindowedSpectrum, exponents: ScaleExponents) -> f64 {
    EvidenceCache::from_windowed(g).value(h, exponents)
}

/// Expected evidence under a known generative model, as the explicit
/// four-term closed form (volume factor, noise entropy, log-ratio sum, and
/// the noise and signal quadratic sums kept separate).
pub fn expected_objective(
    h: Hyperparams,
    tm: &TrueModel,
    n: LatticeSize,
    exponents: ScaleExponents,
) -> Result<f64, ModelError> {
    let big = tm.truth_spectrum().size();
    if n > big {
        return Err(ModelError::WindowTooLarge { n: n.get(), size: big.get() });
    }
    let win = window(n);
    let terms = |f: &dyn Fn(f64, f64, f64) -> f64| {
        pairwise_sum(win.indices().map(|(k, l)| {
            let lam = lambda(k, l, big);
            let a = h.gamma + h.alpha * lam;
            let d = h.beta + a;
            f(a, d, tm.truth_spectrum().get(k, l))
        }))
    };
    let log_sum = terms(&|a, d, _| log_ratio(a, d, h.beta));
    let noise_sum = terms(&|a, d, _| (h.beta / tm.beta_star()) * (a / d));
    let signal_sum = terms(&|a, d, p| p * (h.beta * (a / d)));
    let m = n.modes() as f64;
    let volume = exponents.phi * (n.get() as f64 / big.get() as f64).ln();
    Ok(volume + 0.5 * (h.beta.ln() - (2.0 * PI).ln())
        + (log_sum - noise_sum - signal_sum) / (2.0 * m))
}

/// Analytic gradient of the per-mode-normalized evidence. The `phi` term is
/// constant in the hyperparameters, so it never appears here.
pub fn objective_gradient(h: Hyperparams, stats: &[ModeStats]) -> ObjectiveGradient {
    let m = stats.len() as f64;
    let per_mode = |f: &dyn Fn(f64, f64, &ModeStats) -> f64| {
        pairwise_sum(stats.iter().map(|s| {
            let a = h.gamma + h.alpha * s.lambda;
            let d = h.beta + a;
            f(a, d, s)
        }))
    };
    // d/d_alpha ln(a/d) = lambda (1/a - 1/d); d/d_alpha (beta a/d) = lambda (beta/d)^2.
    let sa = per_mode(&|a, d, s| {
        s.lambda * (1.0 / a - 1.0 / d - s.data_power * (h.beta / d).powi(2))
    });
    // d/d_beta ln(a/d) = -1/d; d/d_beta (beta a/d) = (a/d)^2.
    let sb = per_mode(&|a, d, s| -1.0 / d - s.data_power * (a / d).powi(2));
    let sg = per_mode(&|a, d, s| 1.0 / a - 1.0 / d - s.data_power * (h.beta / d).powi(2));
    ObjectiveGradient {
        d_alpha: sa / (2.0 * m),
        d_beta: 0.5 / h.beta + sb / (2.0 * m),
        d_gamma: sg / (2.0 * m),
    }
}
