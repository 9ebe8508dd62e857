//! Python bindings: the sampling / degradation / estimation / restoration
//! pipeline plus the closed-form risk, with plain floats and lists at the
//! boundary. Pixel values are raw reals in row-major order.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sggm::estimator::{estimate_empirical, OptimizerConfig};
use sggm::evaluation::closed_form_risk;
use sggm::model::{Hyperparams, TrueModel};
use sggm::restoration::posterior_mean;
use sggm::spectral::{forward_dft, select_window, LatticeSize, PixelField, ScaleExponents};
use sggm::synthesis::{degrade as degrade_field, sample_prior, NoiseSpec, SeededRng};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lattice(n: usize) -> PyResult<LatticeSize> {
    LatticeSize::new(n).map_err(value_error)
}

fn weights(alpha: f64, beta: f64, gamma: f64) -> PyResult<Hyperparams> {
    Hyperparams::new(alpha, beta, gamma).map_err(value_error)
}

/// Square grayscale image; values are unclamped reals.
#[pyclass(frozen)]
struct Field {
    inner: PixelField,
}

#[pymethods]
impl Field {
    #[new]
    fn new(size: usize, values: Vec<f64>) -> PyResult<Self> {
        let inner = PixelField::from_values(lattice(size)?, values).map_err(value_error)?;
        Ok(Field { inner })
    }

    /// Side length of the lattice.
    #[getter]
    fn size(&self) -> usize {
        self.inner.size().get()
    }

    /// Row-major copy of the pixel values.
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn get(&self, x: usize, y: usize) -> PyResult<f64> {
        let n = self.inner.size().get();
        if x >= n || y >= n {
            return Err(value_error(format!("pixel ({x}, {y}) outside a {n}x{n} field")));
        }
        Ok(self.inner.get(x, y))
    }

    fn __len__(&self) -> usize {
        self.inner.values().len()
    }

    fn __repr__(&self) -> String {
        format!("Field(size={})", self.inner.size())
    }
}

/// Fitted weights plus how the search ended.
#[pyclass(frozen)]
struct Estimate {
    #[pyo3(get)]
    alpha: f64,
    #[pyo3(get)]
    beta: f64,
    #[pyo3(get)]
    gamma: f64,
    #[pyo3(get)]
    objective: f64,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    degenerate_data: bool,
}

#[pymethods]
impl Estimate {
    fn __repr__(&self) -> String {
        format!(
            "Estimate(alpha={:.6e}, beta={:.6e}, gamma={:.6e}, converged={})",
            self.alpha, self.beta, self.gamma, self.converged
        )
    }
}

/// Closed-form restoration risk of given weights against a known truth.
#[pyclass(frozen)]
struct Risk {
    #[pyo3(get)]
    d_n: f64,
    #[pyo3(get)]
    variance_term: f64,
    #[pyo3(get)]
    bias_term: f64,
    #[pyo3(get)]
    snr_db: f64,
}

#[pymethods]
impl Risk {
    fn __repr__(&self) -> String {
        format!("Risk(d_n={:.6}, snr_db={:.4})", self.d_n, self.snr_db)
    }
}

/// Draw a clean field from the smoothness prior. `draw` selects an
/// independent stream under the same seed.
#[pyfunction]
#[pyo3(signature = (alpha, gamma, size, seed, draw = 0))]
fn sample(alpha: f64, gamma: f64, size: usize, seed: u64, draw: u64) -> PyResult<Field> {
    let h = weights(alpha, 1.0, gamma)?;
    let inner = sample_prior(h, lattice(size)?, SeededRng::with_draw(seed, draw));
    Ok(Field { inner })
}

/// Add white noise of the given standard deviation.
#[pyfunction]
#[pyo3(signature = (field, sigma, seed, draw = 0))]
fn degrade(field: &Field, sigma: f64, seed: u64, draw: u64) -> PyResult<Field> {
    let noise = NoiseSpec::new(sigma).map_err(value_error)?;
    let inner = degrade_field(&field.inner, noise, SeededRng::with_draw(seed, draw));
    Ok(Field { inner })
}

/// Fit (alpha, beta, gamma) to an observed field by evidence maximization
/// over the lowest `n` by `n` frequency window (full lattice when omitted).
#[pyfunction]
#[pyo3(signature = (field, n = None))]
fn estimate(field: &Field, n: Option<usize>) -> PyResult<Estimate> {
    let full = field.inner.size();
    let win = match n {
        Some(n) => lattice(n)?,
        None => full,
    };
    let spectrum = forward_dft(&field.inner);
    let windowed = select_window(&spectrum, win).map_err(value_error)?;
    let fit =
        estimate_empirical(&windowed, ScaleExponents::default(), &OptimizerConfig::default());
    Ok(Estimate {
        alpha: fit.estimate.alpha(),
        beta: fit.estimate.beta(),
        gamma: fit.estimate.gamma(),
        objective: fit.objective_value,
        iterations: fit.iterations,
        converged: fit.converged,
        degenerate_data: fit.degenerate_data,
    })
}

/// Posterior-mean restoration under the given weights.
#[pyfunction]
fn denoise(field: &Field, alpha: f64, beta: f64, gamma: f64) -> PyResult<Field> {
    let h = weights(alpha, beta, gamma)?;
    Ok(Field { inner: posterior_mean(&field.inner, h).restored })
}

/// Expected per-pixel squared restoration error of the weights when the
/// clean field is `truth` and the channel adds noise of deviation `sigma`.
#[pyfunction]
fn risk(truth: &Field, sigma: f64, alpha: f64, beta: f64, gamma: f64) -> PyResult<Risk> {
    let noise = NoiseSpec::new(sigma).map_err(value_error)?;
    let tm = TrueModel::from_truth(&truth.inner, noise.precision()).map_err(value_error)?;
    let report = closed_form_risk(weights(alpha, beta, gamma)?, &tm);
    Ok(Risk {
        d_n: report.d_n,
        variance_term: report.variance_term,
        bias_term: report.bias_term,
        snr_db: report.snr_db,
    })
}

#[pymodule]
fn sggm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Field>()?;
    m.add_class::<Estimate>()?;
    m.add_class::<Risk>()?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(degrade, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(denoise, m)?)?;
    m.add_function(wrap_pyfunction!(risk, m)?)?;
    Ok(())
}
