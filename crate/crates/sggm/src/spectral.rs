//! Periodic lattice fields, the unitary 2-D DFT, and centered frequency
//! windows.
//!
//! Spectral coefficients are stored in FFT-natural order: `coeffs[k*n + l]`
//! holds mode `(k, l)` with `k, l` in `0..n`. Window labels are signed and
//! map onto that storage modulo `n`. The transform pair is unitary, i.e.
//! `F(k,l) = (1/n) * sum f(x,y) exp(-i 2π (kx+ly)/n)` and its adjoint, so
//! Parseval holds without extra factors.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

/// Relative ceiling on the imaginary residual of an inverse transform before
/// the realized field is flagged as coming from a non-Hermitian spectrum.
pub const HERMITIAN_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("lattice size must be at least 1")]
    InvalidSize,
    #[error("window size {n} exceeds lattice size {size}")]
    WindowTooLarge { n: usize, size: usize },
    #[error("expected {expected} coefficients for the window, got {actual}")]
    WindowMismatch { expected: usize, actual: usize },
    #[error("expected {expected} values for the lattice, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
}

/// Side length of a square periodic lattice; at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeSize(usize);

impl LatticeSize {
    pub fn new(n: usize) -> Result<Self, SpectralError> {
        if n == 0 {
            return Err(SpectralError::InvalidSize);
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Number of lattice sites and of spectral modes, `n^2`.
    pub fn modes(self) -> usize {
        self.0 * self.0
    }
}

impl fmt::Display for LatticeSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coarse-graining exponents: `psi` rescales coefficient amplitude and `phi`
/// weights the window-volume factor of the evidence. Hyperparameter estimates
/// are invariant to both; only reported objective values shift with `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScaleExponents {
    pub psi: f64,
    pub phi: f64,
}

/// Discrete Laplacian eigenvalue of mode `(k, l)` on a `size`-periodic
/// lattice: `4 - 2cos(2πk/n) - 2cos(2πl/n)`, in `[0, 8]`, zero exactly at
/// `(0, 0)` mod `n`. Frequencies are folded to their non-negative alias so
/// `(k, l)` and `(-k, -l)` give bit-identical values.
pub fn lambda(k: i64, l: i64, size: LatticeSize) -> f64 {
    let n = size.get();
    let step = 2.0 * PI / n as f64;
    let fold = |i: i64| -> f64 {
        let r = i.rem_euclid(n as i64) as usize;
        r.min(n - r) as f64
    };
    4.0 - 2.0 * (step * fold(k)).cos() - 2.0 * (step * fold(l)).cos()
}

/// Centered square window `W(n)`: signed labels `k, l` in
/// `[-(floor((n-1)/2)), ..., floor(n/2)]`, exactly `n^2` of them, iterated
/// row-major with `k` outermost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyWindow {
    size: LatticeSize,
}

/// Shorthand constructor matching the window notation.
pub fn window(size: LatticeSize) -> FrequencyWindow {
    FrequencyWindow::new(size)
}

impl FrequencyWindow {
    pub fn new(size: LatticeSize) -> Self {
        Self { size }
    }

    pub fn size(self) -> LatticeSize {
        self.size
    }

    pub fn len(self) -> usize {
        self.size.modes()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Smallest signed label in the window.
    pub fn lo(self) -> i64 {
        -((self.size.get() as i64 - 1) / 2)
    }

    /// Largest signed label in the window.
    pub fn hi(self) -> i64 {
        self.size.get() as i64 / 2
    }

    pub fn contains(self, k: i64, l: i64) -> bool {
        let (lo, hi) = (self.lo(), self.hi());
        k >= lo && k <= hi && l >= lo && l <= hi
    }

    pub fn indices(self) -> impl Iterator<Item = (i64, i64)> {
        let (lo, hi) = (self.lo(), self.hi());
        (lo..=hi).flat_map(move |k| (lo..=hi).map(move |l| (k, l)))
    }
}

/// Real field on an `n x n` periodic lattice, row-major with `x` as the row
/// index: `values[x*n + y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelField {
    size: LatticeSize,
    values: Vec<f64>,
}

impl PixelField {
    pub fn zeros(size: LatticeSize) -> Self {
        Self { size, values: vec![0.0; size.modes()] }
    }

    pub fn constant(size: LatticeSize, value: f64) -> Self {
        Self { size, values: vec![value; size.modes()] }
    }

    pub fn from_values(size: LatticeSize, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != size.modes() {
            return Err(SpectralError::SizeMismatch { expected: size.modes(), actual: values.len() });
        }
        Ok(Self { size, values })
    }

    pub fn size(&self) -> LatticeSize {
        self.size
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[x * self.size.get() + y]
    }

    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.values[x * self.size.get() + y] = value;
    }
}

/// Complex spectral coefficients of an `n x n` field in FFT-natural order.
///
/// `hermitian` is a provenance flag: true when the coefficients are known to
/// be conjugate-symmetric because they came from a real field (or from an
/// operation that preserves that symmetry).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    size: LatticeSize,
    coeffs: Vec<Complex64>,
    hermitian: bool,
}

impl SpectralField {
    pub fn zeros(size: LatticeSize) -> Self {
        Self { size, coeffs: vec![Complex64::ZERO; size.modes()], hermitian: true }
    }

    /// Builds a field from raw coefficients. The Hermitian flag is set only
    /// when conjugate symmetry holds exactly.
    pub fn from_coeffs(size: LatticeSize, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != size.modes() {
            return Err(SpectralError::SizeMismatch { expected: size.modes(), actual: coeffs.len() });
        }
        let hermitian = exactly_conjugate_symmetric(&coeffs, size.get());
        Ok(Self { size, coeffs, hermitian })
    }

    pub(crate) fn from_coeffs_with_flag(size: LatticeSize, coeffs: Vec<Complex64>, hermitian: bool) -> Self {
        debug_assert_eq!(coeffs.len(), size.modes());
        Self { size, coeffs, hermitian }
    }

    pub fn size(&self) -> LatticeSize {
        self.size
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    /// Coefficient at signed mode label `(k, l)`, reduced modulo `n`.
    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        let n = self.size.get() as i64;
        let (k, l) = (k.rem_euclid(n) as usize, l.rem_euclid(n) as usize);
        self.coeffs[k * self.size.get() + l]
    }
}

fn exactly_conjugate_symmetric(coeffs: &[Complex64], n: usize) -> bool {
    for k in 0..n {
        for l in 0..n {
            let (ck, cl) = ((n - k) % n, (n - l) % n);
            let a = coeffs[k * n + l];
            let b = coeffs[ck * n + cl];
            if a.re != b.re || a.im != -b.im {
                return false;
            }
        }
    }
    true
}

/// Real field realized by an inverse transform, together with the largest
/// imaginary part that was discarded. `non_hermitian` is set when that
/// residual exceeds [`HERMITIAN_RESIDUAL_TOL`] relative to the field's own
/// sup-norm.
#[derive(Debug, Clone)]
pub struct RealizedField {
    pub field: PixelField,
    pub max_imag: f64,
    pub non_hermitian: bool,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_2d(buf: &mut [Complex64], n: usize, forward: bool) {
    let fft = PLANNER.with(|cell| {
        let mut planner = cell.borrow_mut();
        if forward {
            planner.plan_fft_forward(n)
        } else {
            planner.plan_fft_inverse(n)
        }
    });
    // Rows, then columns via transpose.
    fft.process(buf);
    let mut t = vec![Complex64::ZERO; n * n];
    for r in 0..n {
        for c in 0..n {
            t[c * n + r] = buf[r * n + c];
        }
    }
    fft.process(&mut t);
    for r in 0..n {
        for c in 0..n {
            buf[c * n + r] = t[r * n + c];
        }
    }
}

/// Unitary forward transform of a real field.
pub fn forward_dft(field: &PixelField) -> SpectralField {
    let n = field.size().get();
    let mut buf: Vec<Complex64> =
        field.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_2d(&mut buf, n, true);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    SpectralField::from_coeffs_with_flag(field.size(), buf, true)
}

/// Unitary inverse transform. The imaginary residual is reported rather than
/// treated as an error so that deliberately non-Hermitian coarse fields can
/// still be realized.
pub fn inverse_dft(spectrum: &SpectralField) -> RealizedField {
    let n = spectrum.size().get();
    let mut buf = spectrum.coeffs().to_vec();
    fft_2d(&mut buf, n, false);
    let scale = 1.0 / n as f64;
    let mut values = Vec::with_capacity(buf.len());
    let mut max_abs = 0.0f64;
    let mut max_imag = 0.0f64;
    for c in &buf {
        let re = c.re * scale;
        let im = c.im * scale;
        max_abs = max_abs.max(re.abs());
        max_imag = max_imag.max(im.abs());
        values.push(re);
    }
    let field = PixelField { size: spectrum.size(), values };
    RealizedField { field, max_imag, non_hermitian: max_imag > HERMITIAN_RESIDUAL_TOL * max_abs }
}

/// Spectrum restricted to a centered window, remembering the source lattice.
///
/// Coefficients follow the window's row-major label order; the Laplacian
/// eigenvalues that belong to them are still those of the source lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedSpectrum {
    window: FrequencyWindow,
    source_size: LatticeSize,
    coeffs: Vec<Complex64>,
}

impl WindowedSpectrum {
    pub fn from_parts(
        window: FrequencyWindow,
        source_size: LatticeSize,
        coeffs: Vec<Complex64>,
    ) -> Result<Self, SpectralError> {
        if window.size() > source_size {
            return Err(SpectralError::WindowTooLarge {
                n: window.size().get(),
                size: source_size.get(),
            });
        }
        if coeffs.len() != window.len() {
            return Err(SpectralError::WindowMismatch { expected: window.len(), actual: coeffs.len() });
        }
        Ok(Self { window, source_size, coeffs })
    }

    pub fn window(&self) -> FrequencyWindow {
        self.window
    }

    pub fn source_size(&self) -> LatticeSize {
        self.source_size
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Window labels paired with their coefficients, in window order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.window.indices().zip(self.coeffs.iter().copied())
    }
}

/// Restricts a spectrum to the centered window of side `n`.
pub fn select_window(
    spectrum: &SpectralField,
    n: LatticeSize,
) -> Result<WindowedSpectrum, SpectralError> {
    if n > spectrum.size() {
        return Err(SpectralError::WindowTooLarge { n: n.get(), size: spectrum.size().get() });
    }
    let win = window(n);
    let coeffs = win.indices().map(|(k, l)| spectrum.get(k, l)).collect();
    Ok(WindowedSpectrum { window: win, source_size: spectrum.size(), coeffs })
}

/// Band-limits a spectrum to `W(n)`, scales by `(n/N)^exponent`, and
/// re-indexes the result on the `n x n` lattice.
///
/// For even `n < N` the window is asymmetric around zero, so the result is in
/// general not Hermitian; the flag is kept only when symmetry is guaranteed
/// (odd `n`, or `n = N`).
pub fn coarse_grain(
    spectrum: &SpectralField,
    n: LatticeSize,
    exponent: f64,
) -> Result<SpectralField, SpectralError> {
    let selected = select_window(spectrum, n)?;
    let big = spectrum.size().get();
    let small = n.get();
    let scale = (small as f64 / big as f64).powf(exponent);
    let mut coeffs = vec![Complex64::ZERO; n.modes()];
    for ((k, l), c) in selected.iter() {
        let (rk, rl) = (k.rem_euclid(small as i64) as usize, l.rem_euclid(small as i64) as usize);
        coeffs[rk * small + rl] = scale * c;
    }
    let hermitian = spectrum.hermitian() && (small % 2 == 1 || small == big);
    Ok(SpectralField::from_coeffs_with_flag(n, coeffs, hermitian))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn size(n: usize) -> LatticeSize {
        LatticeSize::new(n).unwrap()
    }

    fn random_field(n: usize, seed: u64) -> PixelField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        PixelField::from_values(size(n), values).unwrap()
    }

    /// Literal quadruple-loop DFT used as an oracle for the FFT-backed path.
    fn direct_dft(field: &PixelField) -> Vec<Complex64> {
        let n = field.size().get();
        let mut out = vec![Complex64::ZERO; n * n];
        for k in 0..n {
            for l in 0..n {
                let mut acc = Complex64::ZERO;
                for x in 0..n {
                    for y in 0..n {
                        let phase = -2.0 * PI * (k * x + l * y) as f64 / n as f64;
                        acc += field.get(x, y) * Complex64::new(phase.cos(), phase.sin());
                    }
                }
                out[k * n + l] = acc / n as f64;
            }
        }
        out
    }

    #[test]
    fn zero_size_rejected() {
        assert_eq!(LatticeSize::new(0), Err(SpectralError::InvalidSize));
    }

    #[test]
    fn window_bounds_small_sizes() {
        // n = 1: {0}; n = 2: {0, 1}; n = 3: {-1, 0, 1}; n = 4: {-1, 0, 1, 2}.
        let cases = [(1, 0, 0), (2, 0, 1), (3, -1, 1), (4, -1, 2), (5, -2, 2)];
        for (n, lo, hi) in cases {
            let w = window(size(n));
            assert_eq!((w.lo(), w.hi()), (lo, hi), "n = {n}");
            assert_eq!(w.len(), n * n);
            assert!(w.contains(0, 0));
            assert_eq!(w.indices().count(), n * n);
        }
    }

    #[test]
    fn window_indices_row_major() {
        let got: Vec<_> = window(size(2)).indices().collect();
        assert_eq!(got, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let got: Vec<_> = window(size(3)).indices().collect();
        assert_eq!(
            got,
            vec![
                (-1, -1), (-1, 0), (-1, 1),
                (0, -1), (0, 0), (0, 1),
                (1, -1), (1, 0), (1, 1),
            ]
        );
    }

    #[test]
    fn lambda_landmarks() {
        let n = size(8);
        assert_eq!(lambda(0, 0, n), 0.0);
        assert!((lambda(4, 4, n) - 8.0).abs() < 1e-15);
        assert!((lambda(4, 0, n) - 4.0).abs() < 1e-15);
        assert!((lambda(1, 0, size(4)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_periodic_and_even_bitwise() {
        let n = size(12);
        for k in -15..=15i64 {
            for l in -15..=15i64 {
                let a = lambda(k, l, n);
                assert_eq!(a.to_bits(), lambda(k + 12, l - 24, n).to_bits());
                assert_eq!(a.to_bits(), lambda(-k, -l, n).to_bits());
                assert!((0.0..=8.0).contains(&a));
                if (k.rem_euclid(12), l.rem_euclid(12)) != (0, 0) {
                    assert!(a > 0.0);
                } else {
                    assert_eq!(a, 0.0);
                }
            }
        }
    }

    #[test]
    fn constant_field_concentrates_at_dc() {
        let n = 6;
        let f = PixelField::constant(size(n), 2.5);
        let spec = forward_dft(&f);
        let dc = spec.get(0, 0);
        assert!((dc.re - n as f64 * 2.5).abs() < 1e-12);
        assert!(dc.im.abs() < 1e-12);
        for (i, c) in spec.coeffs().iter().enumerate() {
            if i != 0 {
                assert!(c.norm() < 1e-12, "mode {i} not zero: {c}");
            }
        }
    }

    #[test]
    fn cosine_row_excites_unit_modes() {
        let n = 8;
        let mut f = PixelField::zeros(size(n));
        for x in 0..n {
            let v = (2.0 * PI * x as f64 / n as f64).cos();
            for y in 0..n {
                f.set(x, y, v);
            }
        }
        let spec = forward_dft(&f);
        let expect = (n as f64).powi(2) / 4.0;
        assert!((spec.get(1, 0).norm_sqr() - expect).abs() < 1e-9);
        assert!((spec.get(-1, 0).norm_sqr() - expect).abs() < 1e-9);
        // Everything else is zero.
        let total: f64 = spec.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!((total - 2.0 * expect).abs() < 1e-9);
    }

    #[test]
    fn fft_matches_direct_dft() {
        for (n, seed) in [(4usize, 1u64), (5, 2), (8, 3)] {
            let f = random_field(n, seed);
            let fast = forward_dft(&f);
            let slow = direct_dft(&f);
            for (a, b) in fast.coeffs().iter().zip(&slow) {
                assert!((a - b).norm() < 1e-12, "n = {n}");
            }
        }
    }

    #[test]
    fn parseval_energy_identity() {
        let f = random_field(16, 9);
        let spec = forward_dft(&f);
        let spatial: f64 = f.values().iter().map(|v| v * v).sum();
        let spectral: f64 = spec.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!((spatial - spectral).abs() < 1e-10 * spatial.max(1.0));
    }

    #[test]
    fn round_trip_is_identity() {
        let f = random_field(8, 4);
        let back = inverse_dft(&forward_dft(&f));
        assert!(!back.non_hermitian);
        assert!(back.max_imag < 1e-12);
        for (a, b) in back.field.values().iter().zip(f.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn forward_dft_marks_hermitian() {
        let f = random_field(6, 5);
        assert!(forward_dft(&f).hermitian());
    }

    #[test]
    fn from_coeffs_detects_symmetry() {
        let n = size(4);
        let f = random_field(4, 6);
        let sym = forward_dft(&f).coeffs().to_vec();
        // The FFT output is only approximately symmetric; build an exactly
        // symmetric table by mirroring one half.
        let mut exact = sym.clone();
        for k in 0..4usize {
            for l in 0..4usize {
                let (ck, cl) = ((4 - k) % 4, (4 - l) % 4);
                if (ck, cl) > (k, l) {
                    exact[ck * 4 + cl] = exact[k * 4 + l].conj();
                } else if (ck, cl) == (k, l) {
                    exact[k * 4 + l] = Complex64::new(exact[k * 4 + l].re, 0.0);
                }
            }
        }
        let field = SpectralField::from_coeffs(n, exact).unwrap();
        assert!(field.hermitian());

        let mut broken = field.coeffs().to_vec();
        broken[1] += Complex64::new(0.0, 1e-3);
        assert!(!SpectralField::from_coeffs(n, broken).unwrap().hermitian());
    }

    #[test]
    fn inverse_flags_non_hermitian_input() {
        let n = size(4);
        let mut coeffs = vec![Complex64::ZERO; 16];
        coeffs[1] = Complex64::new(1.0, 0.5); // (0,1) with no conjugate partner
        let spec = SpectralField::from_coeffs(n, coeffs).unwrap();
        assert!(!spec.hermitian());
        let realized = inverse_dft(&spec);
        assert!(realized.non_hermitian);
        assert!(realized.max_imag > 0.0);
    }

    #[test]
    fn select_window_full_and_dc() {
        let f = random_field(6, 7);
        let spec = forward_dft(&f);
        let full = select_window(&spec, size(6)).unwrap();
        assert_eq!(full.len(), 36);
        // Full window in window order must contain exactly the same values.
        for ((k, l), c) in full.iter() {
            assert_eq!(c, spec.get(k, l));
        }
        let dc = select_window(&spec, size(1)).unwrap();
        assert_eq!(dc.coeffs(), &[spec.get(0, 0)]);
    }

    #[test]
    fn select_window_even_modes() {
        let f = random_field(4, 8);
        let spec = forward_dft(&f);
        let w = select_window(&spec, size(2)).unwrap();
        let labels: Vec<_> = w.iter().map(|(kl, _)| kl).collect();
        assert_eq!(labels, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn select_window_rejects_oversize() {
        let f = random_field(4, 8);
        let spec = forward_dft(&f);
        assert_eq!(
            select_window(&spec, size(5)),
            Err(SpectralError::WindowTooLarge { n: 5, size: 4 })
        );
    }

    #[test]
    fn windowed_from_parts_checks_length() {
        let err = WindowedSpectrum::from_parts(window(size(2)), size(4), vec![Complex64::ZERO; 3]);
        assert_eq!(err, Err(SpectralError::WindowMismatch { expected: 4, actual: 3 }));
    }

    #[test]
    fn coarse_grain_identity_at_full_size() {
        let f = random_field(6, 10);
        let spec = forward_dft(&f);
        let same = coarse_grain(&spec, size(6), 1.7).unwrap();
        assert_eq!(same, spec);
    }

    #[test]
    fn coarse_grain_zero_exponent_truncates() {
        let f = random_field(8, 11);
        let spec = forward_dft(&f);
        let cut = coarse_grain(&spec, size(4), 0.0).unwrap();
        for (k, l) in window(size(4)).indices() {
            assert_eq!(cut.get(k, l), spec.get(k, l));
        }
    }

    #[test]
    fn coarse_grain_scales_dc_for_constant_field() {
        // Halving a constant field with exponent 1 halves the dc coefficient.
        let f = PixelField::constant(size(8), 3.0);
        let spec = forward_dft(&f);
        let half = coarse_grain(&spec, size(4), 1.0).unwrap();
        assert!((half.get(0, 0).re - 12.0).abs() < 1e-9); // N*c = 24 -> 12
    }

    #[test]
    fn coarse_grain_hermitian_flag_rule() {
        let f = random_field(8, 12);
        let spec = forward_dft(&f);
        assert!(coarse_grain(&spec, size(5), 0.5).unwrap().hermitian());
        assert!(coarse_grain(&spec, size(8), 0.5).unwrap().hermitian());
        assert!(!coarse_grain(&spec, size(4), 0.5).unwrap().hermitian());
    }

    #[test]
    fn coarse_grain_exponent_relation() {
        let f = random_field(8, 13);
        let spec = forward_dft(&f);
        let a = coarse_grain(&spec, size(4), 2.0).unwrap();
        let b = coarse_grain(&spec, size(4), 1.0).unwrap();
        for (ca, cb) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((ca - cb * 0.5).norm() < 1e-14);
        }
    }
}
