//! Closed-form restoration risk and its Monte-Carlo cross-checks.
//!
//! The per-pixel mean squared error of the spectral posterior mean splits
//! exactly into a noise-amplification sum and a signal-attenuation sum over
//! the full frequency window; no sampling is involved. Monte-Carlo helpers
//! exist to validate that formula, not to replace it.

use crate::model::{wiener_gain, Hyperparams, TrueModel};
use crate::numeric::{pairwise_mean, pairwise_sum};
use crate::restoration::posterior_mean;
use crate::spectral::{lambda, window, PixelField};
use crate::synthesis::{degrade, NoiseSpec, SeededRng};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvaluationError {
    #[error("signal-to-noise ratio needs positive variance and risk, got {variance} and {risk}")]
    NonPositiveInput { variance: f64, risk: f64 },
}

/// Decomposed per-pixel restoration risk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    /// Expected per-pixel squared error; sum of the two terms below.
    pub d_n: f64,
    /// Contribution of channel noise passed through the squared gains.
    pub variance_term: f64,
    /// Contribution of signal energy removed by the gains.
    pub bias_term: f64,
    /// `10 log10(Var[truth] / d_n)`.
    pub snr_db: f64,
}

/// Exact risk of restoring with weights `h` when the data come from `tm`.
pub fn closed_form_risk(h: Hyperparams, tm: &TrueModel) -> RiskReport {
    let size = tm.truth_spectrum().size();
    let pixels = size.modes() as f64;
    let noise_variance = 1.0 / tm.beta_star();
    let mut variance_parts = Vec::with_capacity(size.modes());
    let mut bias_parts = Vec::with_capacity(size.modes());
    for (k, l) in window(size).indices() {
        let gain = wiener_gain(h, lambda(k, l, size));
        // 1 - gain computed from the model weights directly; the subtraction
        // would lose digits exactly where the gain approaches one.
        let attenuation = {
            let signal = h.gamma() + h.alpha() * lambda(k, l, size);
            signal / (h.beta() + signal)
        };
        variance_parts.push(noise_variance * gain * gain);
        bias_parts.push(tm.truth_spectrum().get(k, l) * attenuation * attenuation);
    }
    let variance_term = pairwise_sum(variance_parts) / pixels;
    let bias_term = pairwise_sum(bias_parts) / pixels;
    let d_n = variance_term + bias_term;
    let snr_db = 10.0 * (tm.truth_variance() / d_n).log10();
    RiskReport { d_n, variance_term, bias_term, snr_db }
}

/// Signal-to-noise ratio in decibels.
pub fn snr_db(var_truth: f64, d_n: f64) -> Result<f64, EvaluationError> {
    // NaN fails the test too and lands in the error arm.
    let positive = var_truth > 0.0 && d_n > 0.0;
    if !positive {
        return Err(EvaluationError::NonPositiveInput { variance: var_truth, risk: d_n });
    }
    Ok(10.0 * (var_truth / d_n).log10())
}

/// Population variance over all pixels.
pub fn variance_of(f: &PixelField) -> f64 {
    let mean = pairwise_mean(f.values());
    pairwise_mean(&f.values().iter().map(|v| (v - mean) * (v - mean)).collect::<Vec<_>>())
}

/// Empirical counterpart of [`closed_form_risk`]: repeatedly degrade the
/// truth, restore, and average the per-pixel squared error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloRisk {
    pub mean: f64,
    pub standard_error: f64,
    pub draws: usize,
}

pub fn monte_carlo_risk(
    h: Hyperparams,
    truth: &PixelField,
    noise: NoiseSpec,
    seed: u64,
    draws: usize,
) -> MonteCarloRisk {
    assert!(draws >= 2, "a standard error needs at least two draws");
    let pixels = truth.values().len() as f64;
    let mut losses = Vec::with_capacity(draws);
    for draw in 0..draws {
        let g = degrade(truth, noise, SeededRng::with_draw(seed, draw as u64));
        let restored = posterior_mean(&g, h).restored;
        let loss = truth
            .values()
            .iter()
            .zip(restored.values())
            .map(|(t, r)| (t - r) * (t - r))
            .sum::<f64>()
            / pixels;
        losses.push(loss);
    }
    let mean = pairwise_mean(&losses);
    let loss_variance =
        pairwise_sum(losses.iter().map(|l| (l - mean) * (l - mean))) / (draws as f64 - 1.0);
    MonteCarloRisk {
        mean,
        standard_error: (loss_variance / draws as f64).sqrt(),
        draws,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::LatticeSize;
    use crate::synthesis::sample_prior;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn size(n: usize) -> LatticeSize {
        LatticeSize::new(n).unwrap()
    }

    fn h(alpha: f64, beta: f64, gamma: f64) -> Hyperparams {
        Hyperparams::new(alpha, beta, gamma).unwrap()
    }

    fn random_truth(n: usize, seed: u64) -> PixelField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n * n).map(|_| rng.random_range(-5.0..5.0)).collect();
        PixelField::from_values(size(n), values).unwrap()
    }

    #[test]
    fn risk_splits_into_its_terms() {
        let truth = random_truth(8, 1);
        let tm = TrueModel::from_truth(&truth, 0.25).unwrap();
        let report = closed_form_risk(h(1.0, 0.5, 0.1), &tm);
        assert_eq!(report.d_n, report.variance_term + report.bias_term);
        assert!(report.d_n > 0.0);
        let want = snr_db(tm.truth_variance(), report.d_n).unwrap();
        assert!((report.snr_db - want).abs() < 1e-12);
    }

    #[test]
    fn vanishing_smoothness_has_flat_gain() {
        let truth = random_truth(8, 2);
        let tm = TrueModel::from_truth(&truth, 0.5).unwrap();
        let (beta, gamma) = (2.0, 0.5);
        let report = closed_form_risk(h(1e-15, beta, gamma), &tm);
        let gain = beta / (beta + gamma);
        let ms = pairwise_mean(&truth.values().iter().map(|v| v * v).collect::<Vec<_>>());
        let want = (1.0 / 0.5) * gain * gain + ms * (gamma / (beta + gamma)).powi(2);
        assert!((report.d_n - want).abs() < 1e-9 * want, "{} vs {want}", report.d_n);
    }

    #[test]
    fn unit_gain_leaves_noise_variance() {
        let truth = random_truth(8, 3);
        let beta_star = 1.0 / 9.0;
        let tm = TrueModel::from_truth(&truth, beta_star).unwrap();
        let report = closed_form_risk(h(1.0, 1e12, 1.0), &tm);
        assert!((report.d_n - 1.0 / beta_star).abs() < 1e-6 / beta_star);
        assert!(report.bias_term < 1e-12);
    }

    #[test]
    fn monte_carlo_confirms_closed_form() {
        let truth = sample_prior(h(1.0, 1.0, 0.01), size(16), SeededRng::new(31));
        let sigma = 1.5;
        let tm = TrueModel::from_truth(&truth, 1.0 / (sigma * sigma)).unwrap();
        let weights = h(0.8, 0.4, 0.02);
        let exact = closed_form_risk(weights, &tm);
        let mc = monte_carlo_risk(weights, &truth, NoiseSpec::new(sigma).unwrap(), 17, 300);
        assert!(
            (mc.mean - exact.d_n).abs() <= 3.0 * mc.standard_error,
            "mc {} vs exact {} (se {})",
            mc.mean,
            exact.d_n,
            mc.standard_error
        );
    }

    #[test]
    fn risk_ignores_sign_and_shift_of_truth() {
        let n = 8usize;
        let truth = random_truth(n, 4);
        let weights = h(0.6, 1.5, 0.05);
        let tm = TrueModel::from_truth(&truth, 1.0).unwrap();
        let flipped = PixelField::from_values(
            size(n),
            truth.values().iter().map(|v| -v).collect(),
        )
        .unwrap();
        let shifted = PixelField::from_values(
            size(n),
            (0..n * n)
                .map(|i| truth.get((i / n + 2) % n, (i % n + 5) % n))
                .collect(),
        )
        .unwrap();
        let base = closed_form_risk(weights, &tm);
        for other in [flipped, shifted] {
            let tm_other = TrueModel::from_truth(&other, 1.0).unwrap();
            let report = closed_form_risk(weights, &tm_other);
            assert!((report.d_n - base.d_n).abs() < 1e-12 * base.d_n);
        }
    }

    #[test]
    fn terms_move_oppositely_in_noise_weight() {
        let truth = random_truth(8, 5);
        let tm = TrueModel::from_truth(&truth, 1.0).unwrap();
        let betas = [4.0, 2.0, 1.0, 0.5, 0.25];
        let reports: Vec<RiskReport> =
            betas.iter().map(|&b| closed_form_risk(h(1.0, b, 0.1), &tm)).collect();
        for pair in reports.windows(2) {
            assert!(pair[1].variance_term < pair[0].variance_term);
            assert!(pair[1].bias_term > pair[0].bias_term);
        }
    }

    #[test]
    fn snr_reference_points() {
        assert_eq!(snr_db(1.0, 1.0).unwrap(), 0.0);
        assert!((snr_db(100.0, 1.0).unwrap() - 20.0).abs() < 1e-12);
        assert!((snr_db(3200.0, 1600.0).unwrap() - 10.0 * 2f64.log10()).abs() < 1e-12);
        assert!(snr_db(0.0, 1.0).is_err());
        assert!(snr_db(1.0, 0.0).is_err());
        assert!(snr_db(1.0, -2.0).is_err());
        assert!(snr_db(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn variance_reference_points() {
        assert_eq!(variance_of(&PixelField::constant(size(4), 7.5)), 0.0);
        let half = PixelField::from_values(
            size(4),
            (0..16).map(|i| if i < 8 { 0.0 } else { 2.0 }).collect(),
        )
        .unwrap();
        assert_eq!(variance_of(&half), 1.0);
        // Two-pass oracle on a random field.
        let f = random_truth(8, 6);
        let mean = f.values().iter().sum::<f64>() / 64.0;
        let want = f.values().iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 64.0;
        assert!((variance_of(&f) - want).abs() <= 1e-12 * want.max(1.0));
    }

    #[test]
    fn risk_with_estimated_weights_beats_observation_level() {
        // Matched-model sanity: fitting to expected evidence at full window
        // then restoring should do no worse than leaving the data alone.
        let truth = sample_prior(h(1.0, 1.0, 0.01), size(24), SeededRng::new(91));
        let sigma = 3.0;
        let beta_star = 1.0 / (sigma * sigma);
        let tm = TrueModel::from_truth(&truth, beta_star).unwrap();
        let report = closed_form_risk(h(1.0, beta_star, 0.01), &tm);
        assert!(report.d_n < sigma * sigma);
        assert!(report.snr_db > snr_db(tm.truth_variance(), sigma * sigma).unwrap());
    }
}
