//! Command layer behind the CLI binary: resolved configurations, pipeline
//! wiring, and report emission. Every artifact gets a JSON sidecar, and a
//! sidecar fed back through `--config` re-runs the command that wrote it.

use crate::estimator::{estimate_empirical, estimate_expected, EstimationResult, OptimizerConfig};
use crate::evaluation::closed_form_risk;
use crate::io::csv::{write_sweep_csv, SweepRecord};
use crate::io::raster::{load_image, save_image, ExportSettings, LoadedImage, GRAY_CHANNEL};
use crate::io::sidecar::{digest_file, ExportInfo, InputInfo, RngInfo, Sidecar};
use crate::io::svg::snr_chart;
use crate::model::{Hyperparams, TrueModel};
use crate::restoration::posterior_mean;
use crate::spectral::{forward_dft, select_window, LatticeSize, PixelField, ScaleExponents};
use crate::synthesis::{degrade, sample_prior, NoiseSpec, SeededRng, RNG_ALGORITHM};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

/// Export shift for prior samples: zero-mean fields land mid-range in the
/// unsigned 16-bit scale and survive the round trip sign intact.
pub const SAMPLE_OFFSET: f64 = 32768.0;

/// Failure classes with distinct process exit codes: configuration problems
/// exit 2, I/O problems exit 3.
#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

/// A command that ran to completion. `ValidationFailed` exits 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    ValidationFailed,
}

fn config_err(msg: impl Into<String>) -> CommandError {
    CommandError::Config(msg.into())
}

fn io_err(e: impl std::fmt::Display) -> CommandError {
    CommandError::Io(e.to_string())
}

fn write_text(path: &Path, text: &str) -> Result<(), CommandError> {
    std::fs::write(path, text).map_err(|e| CommandError::Io(format!("{}: {e}", path.display())))
}

fn config_value<C: Serialize>(cfg: &C) -> Value {
    serde_json::to_value(cfg).expect("command configs are plain data")
}

/// Reads a JSON config file. A sidecar written by this tool is accepted
/// directly: its embedded `config` object is extracted, everything else in
/// it is ignored.
pub fn load_config<C: DeserializeOwned + Default>(path: Option<&Path>) -> Result<C, CommandError> {
    let Some(path) = path else {
        return Ok(C::default());
    };
    let bytes =
        std::fs::read(path).map_err(|e| CommandError::Io(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_slice(&bytes)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let value = match value {
        Value::Object(mut map) if map.contains_key("tool") && map.contains_key("config") => {
            map.remove("config").expect("key checked above")
        }
        other => other,
    };
    serde_json::from_value(value).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CommandError> {
    value.ok_or_else(|| config_err(format!("{flag} is required; pass --{flag} or set it in --config")))
}

/// Loads a square image and removes the export shift its sidecar recorded,
/// so commands always see fields in the raw real domain of the model.
fn load_input(path: &Path) -> Result<(LoadedImage, f64), CommandError> {
    let mut image = load_image(path).map_err(io_err)?;
    let offset = Sidecar::offset_for(path);
    if offset != 0.0 {
        for (_, field) in &mut image.channels {
            for v in field.values_mut() {
                *v -= offset;
            }
        }
    }
    Ok((image, offset))
}

fn input_info(path: &Path) -> Result<InputInfo, CommandError> {
    Ok(InputInfo {
        path: path.display().to_string(),
        sha256: digest_file(path).map_err(io_err)?,
    })
}

fn optimizer_config(
    max_iterations: usize,
    relative_tolerance: f64,
    step_shrink: f64,
) -> Result<OptimizerConfig, CommandError> {
    if max_iterations == 0 {
        return Err(config_err("max-iterations must be at least 1"));
    }
    if !(relative_tolerance > 0.0 && relative_tolerance.is_finite()) {
        return Err(config_err(format!(
            "relative-tolerance must be positive and finite, got {relative_tolerance}"
        )));
    }
    if !(step_shrink > 0.0 && step_shrink < 1.0) {
        return Err(config_err(format!("step-shrink must lie in (0, 1), got {step_shrink}")));
    }
    Ok(OptimizerConfig { max_iterations, relative_tolerance, step_shrink, ..Default::default() })
}

/// `n` and `shrink` are two spellings of one knob; at most one may be given,
/// and neither means the full lattice.
fn resolve_window(n: Option<usize>, shrink: Option<f64>, full: usize) -> Result<usize, CommandError> {
    match (n, shrink) {
        (Some(_), Some(_)) => Err(config_err("give either n or shrink, not both")),
        (Some(n), None) if n == 0 || n > full => {
            Err(config_err(format!("n must lie in 1..={full}, got {n}")))
        }
        (Some(n), None) => Ok(n),
        (None, Some(s)) if !(0.0..1.0).contains(&s) => {
            Err(config_err(format!("shrink must lie in [0, 1), got {s}")))
        }
        (None, Some(s)) => Ok(shrunk_side(s, full)),
        (None, None) => Ok(full),
    }
}

/// Window side retained after discarding a fraction of the band.
fn shrunk_side(shrink: f64, full: usize) -> usize {
    (((1.0 - shrink) * full as f64).round() as usize).clamp(1, full)
}

// ============================================================================
// sample
// ============================================================================

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleConfig {
    pub n: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub seed: u64,
    pub draw: u64,
    pub output: PathBuf,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            n: 64,
            alpha: 1.0,
            gamma: 1e-3,
            seed: 0,
            draw: 0,
            output: PathBuf::from("sample.pgm"),
        }
    }
}

pub fn cmd_sample(cfg: &SampleConfig) -> Result<Outcome, CommandError> {
    let size = LatticeSize::new(cfg.n).map_err(|e| config_err(e.to_string()))?;
    // The channel weight plays no part in prior sampling; any positive value.
    let h = Hyperparams::new(cfg.alpha, 1.0, cfg.gamma).map_err(|e| config_err(e.to_string()))?;
    let field = sample_prior(h, size, SeededRng::with_draw(cfg.seed, cfg.draw));

    let export = ExportSettings { offset: SAMPLE_OFFSET, bit_depth: 16 };
    save_image(&cfg.output, &[(GRAY_CHANNEL, &field)], export).map_err(io_err)?;

    let mut sc = Sidecar::new("sample", config_value(cfg));
    sc.rng = Some(RngInfo { algorithm: RNG_ALGORITHM.into(), seed: cfg.seed, draw: cfg.draw });
    sc.export = Some(ExportInfo { offset: SAMPLE_OFFSET, bit_depth: 16 });
    sc.write_for(&cfg.output).map_err(io_err)?;

    println!("wrote {} ({}x{}, 16-bit)", cfg.output.display(), cfg.n, cfg.n);
    Ok(Outcome::Clean)
}

// ============================================================================
// degrade
// ============================================================================

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DegradeConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub sigma: f64,
    pub seed: u64,
    pub draw: u64,
}

impl Default for DegradeConfig {
    fn default() -> Self {
        Self { input: None, output: None, sigma: 40.0, seed: 0, draw: 0 }
    }
}

pub fn cmd_degrade(cfg: &DegradeConfig) -> Result<Outcome, CommandError> {
    let input = required(cfg.input.as_deref(), "input")?;
    let output = required(cfg.output.as_deref(), "output")?;
    let noise = NoiseSpec::new(cfg.sigma).map_err(|e| config_err(e.to_string()))?;

    let (image, offset) = load_input(input)?;
    let lanes = image.channels.len() as u64;
    // Channel i takes its own slot in the draw family, so color lanes stay
    // independent and a later draw never reuses an earlier lane's stream.
    let noisy: Vec<(String, PixelField)> = image
        .channels
        .iter()
        .enumerate()
        .map(|(i, (name, field))| {
            let rng = SeededRng::with_draw(cfg.seed, cfg.draw * lanes + i as u64);
            (name.clone(), degrade(field, noise, rng))
        })
        .collect();

    let refs: Vec<(&str, &PixelField)> = noisy.iter().map(|(n, f)| (n.as_str(), f)).collect();
    let export = ExportSettings { offset, bit_depth: image.bit_depth };
    save_image(output, &refs, export).map_err(io_err)?;

    let mut sc = Sidecar::new("degrade", config_value(cfg));
    sc.rng = Some(RngInfo { algorithm: RNG_ALGORITHM.into(), seed: cfg.seed, draw: cfg.draw });
    sc.input = Some(input_info(input)?);
    sc.export = Some(ExportInfo { offset, bit_depth: image.bit_depth });
    sc.results = Some(json!({ "sigma": cfg.sigma, "noise_precision": noise.precision() }));
    sc.write_for(output).map_err(io_err)?;

    println!("wrote {} (sigma {})", output.display(), cfg.sigma);
    Ok(Outcome::Clean)
}

// ============================================================================
// estimate
// ============================================================================

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateConfig {
    pub input: Option<PathBuf>,
    /// Report file; the same JSON always goes to stdout.
    pub output: Option<PathBuf>,
    pub n: Option<usize>,
    pub shrink: Option<f64>,
    pub psi: f64,
    pub phi: f64,
    pub max_iterations: usize,
    pub relative_tolerance: f64,
    pub step_shrink: f64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            input: None,
            output: None,
            n: None,
            shrink: None,
            psi: 0.0,
            phi: 0.0,
            max_iterations: 500,
            relative_tolerance: 1e-9,
            step_shrink: 0.5,
        }
    }
}

fn channel_report(name: &str, fit: &EstimationResult, n: usize, full: usize) -> Value {
    let mut entry = json!({
        "channel": name,
        "alpha": fit.estimate.alpha(),
        "beta": fit.estimate.beta(),
        "gamma": fit.estimate.gamma(),
        "objective": fit.objective_value,
        "objective_scope": format!("comparable only between runs with n = {n}"),
        "iterations": fit.iterations,
        "converged": fit.converged,
        "degenerate_data": fit.degenerate_data,
        "n": n,
        "N": full,
    });
    if !fit.converged {
        entry["warning"] = json!("not converged");
    }
    entry
}

pub fn cmd_estimate(cfg: &EstimateConfig) -> Result<Outcome, CommandError> {
    let input = required(cfg.input.as_deref(), "input")?;
    let opt = optimizer_config(cfg.max_iterations, cfg.relative_tolerance, cfg.step_shrink)?;
    let exponents = ScaleExponents { psi: cfg.psi, phi: cfg.phi };

    let (image, _) = load_input(input)?;
    let full = image.size.get();
    let n = resolve_window(cfg.n, cfg.shrink, full)?;
    let window = LatticeSize::new(n).expect("window side validated");

    let results: Vec<Value> = image
        .channels
        .iter()
        .map(|(name, field)| {
            let windowed = select_window(&forward_dft(field), window)
                .map_err(|e| config_err(e.to_string()))?;
            Ok(channel_report(name, &estimate_empirical(&windowed, exponents, &opt), n, full))
        })
        .collect::<Result<_, CommandError>>()?;

    let mut sc = Sidecar::new("estimate", config_value(cfg));
    sc.input = Some(input_info(input)?);
    sc.results = Some(Value::Array(results));
    let mut text = serde_json::to_string_pretty(&sc).expect("report is plain data");
    text.push('\n');
    print!("{text}");
    if let Some(out) = &cfg.output {
        write_text(out, &text)?;
    }
    Ok(Outcome::Clean)
}

// ============================================================================
// denoise
// ============================================================================

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DenoiseConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    /// Window side for a preliminary fit; mutually exclusive with explicit
    /// weights.
    pub estimate_n: Option<usize>,
    pub report: Option<PathBuf>,
    pub psi: f64,
    pub phi: f64,
    pub max_iterations: usize,
    pub relative_tolerance: f64,
    pub step_shrink: f64,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self {
            input: None,
            output: None,
            alpha: None,
            beta: None,
            gamma: None,
            estimate_n: None,
            report: None,
            psi: 0.0,
            phi: 0.0,
            max_iterations: 500,
            relative_tolerance: 1e-9,
            step_shrink: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum WeightSource {
    Explicit(Hyperparams),
    Estimate(usize),
}

fn weight_source(cfg: &DenoiseConfig) -> Result<WeightSource, CommandError> {
    let given = [cfg.alpha, cfg.beta, cfg.gamma].iter().filter(|v| v.is_some()).count();
    match (given, cfg.estimate_n) {
        (3, None) => {
            let h = Hyperparams::new(
                cfg.alpha.expect("counted"),
                cfg.beta.expect("counted"),
                cfg.gamma.expect("counted"),
            )
            .map_err(|e| config_err(e.to_string()))?;
            Ok(WeightSource::Explicit(h))
        }
        (0, Some(0)) => Err(config_err("estimate-n must be at least 1")),
        (0, Some(n)) => Ok(WeightSource::Estimate(n)),
        (0, None) => {
            Err(config_err("no weights to apply: give alpha, beta, and gamma, or estimate-n"))
        }
        (_, Some(_)) => Err(config_err("give explicit weights or estimate-n, not both")),
        _ => Err(config_err("alpha, beta, and gamma must be given together")),
    }
}

pub fn cmd_denoise(cfg: &DenoiseConfig) -> Result<Outcome, CommandError> {
    let input = required(cfg.input.as_deref(), "input")?;
    let output = required(cfg.output.as_deref(), "output")?;
    let opt = optimizer_config(cfg.max_iterations, cfg.relative_tolerance, cfg.step_shrink)?;
    let exponents = ScaleExponents { psi: cfg.psi, phi: cfg.phi };
    // Weight-mode conflicts are caught before any file is touched; only the
    // estimate-n upper bound waits for the image side to be known.
    let source = weight_source(cfg)?;

    let (image, offset) = load_input(input)?;
    let full = image.size.get();

    let mut restored = Vec::with_capacity(image.channels.len());
    let mut results = Vec::with_capacity(image.channels.len());
    for (name, field) in &image.channels {
        let (h, fit) = match source {
            WeightSource::Explicit(h) => (h, None),
            WeightSource::Estimate(n) => {
                let window = LatticeSize::new(n).expect("window side validated");
                let windowed = select_window(&forward_dft(field), window)
                    .map_err(|e| config_err(e.to_string()))?;
                let fit = estimate_empirical(&windowed, exponents, &opt);
                (fit.estimate, Some((fit, n)))
            }
        };
        let out = posterior_mean(field, h);
        println!(
            "{name}: alpha {:.6e}, beta {:.6e}, gamma {:.6e}, mean gain {:.4}",
            h.alpha(),
            h.beta(),
            h.gamma(),
            out.gains.mean
        );

        let mut entry = json!({
            "channel": name,
            "alpha": h.alpha(),
            "beta": h.beta(),
            "gamma": h.gamma(),
            "gain_min": out.gains.min,
            "gain_mean": out.gains.mean,
            "gain_max": out.gains.max,
            "max_imag_residual": out.max_imag_residual,
        });
        if let Some((fit, n)) = fit {
            entry["estimation"] = json!({
                "objective": fit.objective_value,
                "iterations": fit.iterations,
                "converged": fit.converged,
                "degenerate_data": fit.degenerate_data,
                "n": n,
                "N": full,
            });
            if !fit.converged {
                entry["warning"] = json!("not converged");
            }
        }
        results.push(entry);
        restored.push((name.clone(), out.restored));
    }

    // Clamping happens only here, at quantization; the restored field itself
    // stays unbounded through the whole pipeline.
    let refs: Vec<(&str, &PixelField)> = restored.iter().map(|(n, f)| (n.as_str(), f)).collect();
    let export = ExportSettings { offset, bit_depth: image.bit_depth };
    save_image(output, &refs, export).map_err(io_err)?;

    let mut sc = Sidecar::new("denoise", config_value(cfg));
    sc.input = Some(input_info(input)?);
    sc.export = Some(ExportInfo { offset, bit_depth: image.bit_depth });
    sc.results = Some(Value::Array(results));
    sc.write_for(output).map_err(io_err)?;
    if let Some(report) = &cfg.report {
        let mut text = serde_json::to_string_pretty(&sc).expect("report is plain data");
        text.push('\n');
        write_text(report, &text)?;
    }

    println!("wrote {}", output.display());
    Ok(Outcome::Clean)
}

// ============================================================================
// sweep
// ============================================================================

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub input: Option<PathBuf>,
    pub output: PathBuf,
    pub sigma: f64,
    pub fractions: Vec<f64>,
    pub svg: Option<PathBuf>,
    pub psi: f64,
    pub phi: f64,
    pub max_iterations: usize,
    pub relative_tolerance: f64,
    pub step_shrink: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            input: None,
            output: PathBuf::from("sweep.csv"),
            sigma: 40.0,
            fractions: default_fractions(),
            svg: None,
            psi: 0.0,
            phi: 0.0,
            max_iterations: 500,
            relative_tolerance: 1e-9,
            step_shrink: 0.5,
        }
    }
}

/// 0, 0.05, ..., 0.95.
pub fn default_fractions() -> Vec<f64> {
    (0..20).map(|i| i as f64 * 0.05).collect()
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let input = required(cfg.input.as_deref(), "input")?;
    let noise = NoiseSpec::new(cfg.sigma).map_err(|e| config_err(e.to_string()))?;
    if cfg.fractions.is_empty() {
        return Err(config_err("fractions must not be empty"));
    }
    if let Some(bad) = cfg.fractions.iter().find(|f| !(0.0..1.0).contains(*f)) {
        return Err(config_err(format!("shrink fractions must lie in [0, 1), got {bad}")));
    }
    let opt = optimizer_config(cfg.max_iterations, cfg.relative_tolerance, cfg.step_shrink)?;
    let exponents = ScaleExponents { psi: cfg.psi, phi: cfg.phi };

    let (image, _) = load_input(input)?;
    let full = image.size.get();

    let mut records = Vec::with_capacity(image.channels.len() * cfg.fractions.len());
    for (name, field) in &image.channels {
        let tm = TrueModel::from_truth(field, noise.precision())
            .map_err(|e| config_err(e.to_string()))?;
        for &fraction in &cfg.fractions {
            let n = shrunk_side(fraction, full);
            let started = Instant::now();
            let fit = estimate_expected(&tm, LatticeSize::new(n).expect("clamped"), exponents, &opt)
                .map_err(|e| config_err(e.to_string()))?;
            let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
            let risk = closed_form_risk(fit.estimate, &tm);
            records.push(SweepRecord {
                channel: name.clone(),
                n,
                shrink: 1.0 - n as f64 / full as f64,
                alpha: fit.estimate.alpha(),
                beta: fit.estimate.beta(),
                gamma: fit.estimate.gamma(),
                d_n: risk.d_n,
                snr_db: risk.snr_db,
                wall_time_ms,
            });
        }
    }
    // Stable sort: fractions that round to the same window side keep their
    // listed order.
    records.sort_by(|a, b| a.channel.cmp(&b.channel).then(a.n.cmp(&b.n)));

    write_text(&cfg.output, &write_sweep_csv(&records))?;
    let mut sc = Sidecar::new("sweep", config_value(cfg));
    sc.input = Some(input_info(input)?);
    sc.write_for(&cfg.output).map_err(io_err)?;

    if let Some(svg) = &cfg.svg {
        write_text(svg, &snr_chart(&records))?;
        sc.write_for(svg).map_err(io_err)?;
    }

    println!("wrote {} rows to {}", records.len(), cfg.output.display());
    Ok(Outcome::Clean)
}

// ============================================================================
// validate
// ============================================================================

#[cfg(feature = "validation")]
pub fn cmd_validate() -> Result<Outcome, CommandError> {
    let results = crate::validation::run_all();
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        let mark = if r.passed { "pass" } else { "FAIL" };
        println!("{mark}  {:width$}  {}", r.name, r.detail);
    }
    if failed == 0 {
        println!("all {} suites passed", results.len());
        Ok(Outcome::Clean)
    } else {
        println!("{failed} of {} suites failed", results.len());
        Ok(Outcome::ValidationFailed)
    }
}
