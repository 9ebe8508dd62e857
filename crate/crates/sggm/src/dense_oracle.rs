//! Brute-force pixel-space references for the factorized spectral formulas.
//!
//! These helpers materialize the full `n^2 x n^2` precision matrix and work
//! directly in pixel space. They exist to cross-check the spectral path and
//! are capped at tiny lattices; nothing here is meant to be fast.

use nalgebra::{Cholesky, DMatrix, DVector};
use thiserror::Error;

use crate::model::Hyperparams;
use crate::spectral::{LatticeSize, PixelField};

/// Hard cap on the lattice side length accepted by this module.
pub const MAX_ORACLE_SIZE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("lattice size {size} exceeds the dense-oracle cap {max}")]
    SizeLimitExceeded { size: usize, max: usize },
}

fn check_size(size: LatticeSize) -> Result<(), OracleError> {
    if size.get() > MAX_ORACLE_SIZE {
        return Err(OracleError::SizeLimitExceeded { size: size.get(), max: MAX_ORACLE_SIZE });
    }
    Ok(())
}

/// Pixel-space precision matrix `gamma I + alpha Q`.
///
/// `Q` is assembled from the literal per-site quadratic form: every site
/// contributes its right and its down difference with periodic wrap. At
/// `n = 2` that visits each edge twice; the double count is kept on purpose
/// because it is what the energy literally sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePrecision {
    size: LatticeSize,
    matrix: DMatrix<f64>,
}

impl DensePrecision {
    pub fn new(size: LatticeSize, h: Hyperparams) -> Result<Self, OracleError> {
        check_size(size)?;
        let n = size.get();
        let m = size.modes();
        let mut q = DMatrix::<f64>::zeros(m, m);
        for x in 0..n {
            for y in 0..n {
                let i = x * n + y;
                for (dx, dy) in [(1usize, 0usize), (0, 1)] {
                    let j = ((x + dx) % n) * n + (y + dy) % n;
                    q[(i, i)] += 1.0;
                    q[(j, j)] += 1.0;
                    q[(i, j)] -= 1.0;
                    q[(j, i)] -= 1.0;
                }
            }
        }
        let mut matrix = q * h.alpha();
        for i in 0..m {
            matrix[(i, i)] += h.gamma();
        }
        Ok(Self { size, matrix })
    }

    pub fn size(&self) -> LatticeSize {
        self.size
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Log marginal likelihood of noisy data under the dense model, through the
/// covariance `Sigma = C^-1 + I/beta` and its Cholesky factorization.
pub fn log_marginal(g: &PixelField, h: Hyperparams) -> Result<f64, OracleError> {
    let precision = DensePrecision::new(g.size(), h)?;
    let m = g.size().modes();
    let chol_c =
        Cholesky::new(precision.matrix.clone()).expect("prior precision is positive definite");
    let mut sigma = chol_c.inverse();
    let noise = 1.0 / h.beta();
    for i in 0..m {
        sigma[(i, i)] += noise;
    }
    let chol_s = Cholesky::new(sigma).expect("marginal covariance is positive definite");
    let ln_det: f64 = chol_s.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
    let data = DVector::from_column_slice(g.values());
    let quad = data.dot(&chol_s.solve(&data));
    Ok(-0.5 * (m as f64 * (2.0 * std::f64::consts::PI).ln() + ln_det + quad))
}

/// Posterior mean in pixel space: solves `(beta I + C) f = beta g`.
pub fn posterior_mean_dense(g: &PixelField, h: Hyperparams) -> Result<PixelField, OracleError> {
    let precision = DensePrecision::new(g.size(), h)?;
    let m = g.size().modes();
    let mut a = precision.matrix;
    for i in 0..m {
        a[(i, i)] += h.beta();
    }
    let chol = Cholesky::new(a).expect("posterior precision is positive definite");
    let rhs = DVector::from_column_slice(g.values()) * h.beta();
    let mean = chol.solve(&rhs);
    Ok(PixelField::from_values(g.size(), mean.as_slice().to_vec())
        .expect("solution length matches the lattice"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lambda;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn size(n: usize) -> LatticeSize {
        LatticeSize::new(n).unwrap()
    }

    fn h(alpha: f64, beta: f64, gamma: f64) -> Hyperparams {
        Hyperparams::new(alpha, beta, gamma).unwrap()
    }

    #[test]
    fn two_by_two_eigenvalues() {
        // Modes {0,1}^2 have lambda in {0, 4, 4, 8}; with alpha = gamma = 1
        // the precision eigenvalues are {1, 5, 5, 9}. The n = 2 double edge
        // visit is exactly what makes lambda reach 4 and 8 here.
        let c = DensePrecision::new(size(2), h(1.0, 1.0, 1.0)).unwrap();
        let mut eigen: Vec<f64> = c.matrix().clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        eigen.sort_by(f64::total_cmp);
        let expect = [1.0, 5.0, 5.0, 9.0];
        for (a, b) in eigen.iter().zip(expect) {
            assert!((a - b).abs() < 1e-10, "{eigen:?}");
        }
    }

    #[test]
    fn eigenvalues_match_lambda_table() {
        for n in [1usize, 3, 4, 5] {
            let p = h(0.8, 1.0, 0.3);
            let c = DensePrecision::new(size(n), p).unwrap();
            let mut eigen: Vec<f64> =
                c.matrix().clone().symmetric_eigen().eigenvalues.iter().copied().collect();
            eigen.sort_by(f64::total_cmp);
            let mut expect: Vec<f64> = (0..n as i64)
                .flat_map(|k| (0..n as i64).map(move |l| (k, l)))
                .map(|(k, l)| p.gamma() + p.alpha() * lambda(k, l, size(n)))
                .collect();
            expect.sort_by(f64::total_cmp);
            for (a, b) in eigen.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-9, "n = {n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn matrix_is_symmetric_with_gamma_row_sums() {
        // Q annihilates constants, so every row of C sums to gamma.
        let c = DensePrecision::new(size(4), h(2.0, 1.0, 0.25)).unwrap();
        let m = c.matrix();
        for i in 0..16 {
            let row: f64 = (0..16).map(|j| m[(i, j)]).sum();
            assert!((row - 0.25).abs() < 1e-12);
            for j in 0..16 {
                assert_eq!(m[(i, j)], m[(j, i)]);
            }
        }
    }

    #[test]
    fn log_marginal_of_zero_data_is_half_log_det() {
        let p = h(0.7, 2.0, 0.4);
        let n = 3usize;
        let g = PixelField::zeros(size(n));
        let got = log_marginal(&g, p).unwrap();
        // Independent route: eigenvalues of Sigma are 1/beta + 1/(gamma+alpha*lambda).
        let ln_det: f64 = (0..n as i64)
            .flat_map(|k| (0..n as i64).map(move |l| (k, l)))
            .map(|(k, l)| (1.0 / p.beta() + 1.0 / (p.gamma() + p.alpha() * lambda(k, l, size(n)))).ln())
            .sum();
        let expect = -0.5 * (9.0 * (2.0 * std::f64::consts::PI).ln() + ln_det);
        assert!((got - expect).abs() < 1e-10, "{got} vs {expect}");
    }

    #[test]
    fn posterior_mean_of_constant_data_shrinks_by_dc_gain() {
        let p = h(1.3, 4.0, 0.5);
        let g = PixelField::constant(size(4), 2.0);
        let f = posterior_mean_dense(&g, p).unwrap();
        let expect = 4.0 / (4.0 + 0.5) * 2.0;
        for v in f.values() {
            assert!((v - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn posterior_mean_interpolates_toward_data_for_large_beta() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let values: Vec<f64> = (0..16).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g = PixelField::from_values(size(4), values).unwrap();
        let f = posterior_mean_dense(&g, h(1.0, 1e9, 1e-3)).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let p = h(1.0, 1.0, 1.0);
        assert_eq!(
            DensePrecision::new(size(17), p).unwrap_err(),
            OracleError::SizeLimitExceeded { size: 17, max: 16 }
        );
        let g = PixelField::zeros(size(32));
        assert!(log_marginal(&g, p).is_err());
        assert!(posterior_mean_dense(&g, p).is_err());
    }
}
