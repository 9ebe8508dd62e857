//! CLI entry point. Flags shadow config-file fields: a flag wins over the
//! file, the file wins over the built-in default listed in each flag's help.

use clap::{Args, Parser, Subcommand};
use sggm::commands::{
    self, CommandError, DegradeConfig, DenoiseConfig, EstimateConfig, Outcome, SampleConfig,
    SweepConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sggm",
    version,
    about = "Gaussian lattice fields: sample, degrade, estimate, denoise, sweep"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Knobs shared by every command that runs the evidence maximizer.
#[derive(Args)]
struct FitFlags {
    /// Amplitude-rescaling exponent of the coarse-graining [default: 0]
    #[arg(long)]
    psi: Option<f64>,
    /// Volume-rescaling exponent of the coarse-graining [default: 0]
    #[arg(long)]
    phi: Option<f64>,
    /// Iteration budget per start point [default: 500]
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Relative improvement under which the search counts as stationary
    /// [default: 1e-9]
    #[arg(long)]
    relative_tolerance: Option<f64>,
    /// Backtracking factor of the line search, in (0, 1) [default: 0.5]
    #[arg(long)]
    step_shrink: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a smoothness-prior field and write it as a 16-bit PGM
    Sample {
        /// JSON config; a sidecar from an earlier run works as-is
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Lattice side length [default: 64]
        #[arg(long)]
        n: Option<usize>,
        /// Smoothness weight of the prior [default: 1]
        #[arg(long)]
        alpha: Option<f64>,
        /// Ridge weight pinning the free mean level [default: 0.001]
        #[arg(long)]
        gamma: Option<f64>,
        /// RNG seed [default: 0]
        #[arg(long)]
        seed: Option<u64>,
        /// Draw index within the seed's stream family [default: 0]
        #[arg(long)]
        draw: Option<u64>,
        /// Output image path [default: sample.pgm]
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Add white Gaussian noise to an image
    Degrade {
        /// JSON config; a sidecar from an earlier run works as-is
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Input image (.pgm or .png, square)
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Output image path
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Noise standard deviation in pixel units [default: 40]
        #[arg(long)]
        sigma: Option<f64>,
        /// RNG seed [default: 0]
        #[arg(long)]
        seed: Option<u64>,
        /// Draw index within the seed's stream family [default: 0]
        #[arg(long)]
        draw: Option<u64>,
    },
    /// Fit the field weights to an image by evidence maximization
    Estimate {
        /// JSON config; a sidecar from an earlier run works as-is
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Input image (.pgm or .png, square)
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Report file; the report always goes to stdout too
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Window side kept in the band limit [default: the full side]
        #[arg(long)]
        n: Option<usize>,
        /// Band fraction to discard instead of giving n, in [0, 1)
        #[arg(long, conflicts_with = "n")]
        shrink: Option<f64>,
        #[command(flatten)]
        fit: FitFlags,
    },
    /// Restore an image with per-mode gains from given or fitted weights
    Denoise {
        /// JSON config; a sidecar from an earlier run works as-is
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Input image (.pgm or .png, square)
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Output image path
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Smoothness weight; needs beta and gamma alongside
        #[arg(long)]
        alpha: Option<f64>,
        /// Channel noise weight; needs alpha and gamma alongside
        #[arg(long)]
        beta: Option<f64>,
        /// Ridge weight; needs alpha and beta alongside
        #[arg(long)]
        gamma: Option<f64>,
        /// Fit the weights first on this window side instead of giving them
        #[arg(long)]
        estimate_n: Option<usize>,
        /// Optional JSON report path
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        #[command(flatten)]
        fit: FitFlags,
    },
    /// Sweep the band-limit fraction and tabulate risk and SNR per channel
    Sweep {
        /// JSON config; a sidecar from an earlier run works as-is
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Truth image (.pgm or .png, square)
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Output CSV path [default: sweep.csv]
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Noise standard deviation in pixel units [default: 40]
        #[arg(long)]
        sigma: Option<f64>,
        /// Comma-separated shrink fractions [default: 0,0.05,...,0.95]
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
        /// Optional SVG chart of SNR against shrink
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        fit: FitFlags,
    },
    /// Run the built-in numerical self checks
    #[cfg(feature = "validation")]
    Validate,
}

/// Overwrites config fields with the flags that were actually given.
macro_rules! override_with {
    ($cfg:ident, plain: [$($plain:ident),*], optional: [$($opt:ident),*]) => {
        $(if let Some(v) = $plain { $cfg.$plain = v; })*
        $(if let Some(v) = $opt { $cfg.$opt = Some(v); })*
    };
}

impl FitFlags {
    fn psi_phi(&self, psi: &mut f64, phi: &mut f64) {
        if let Some(v) = self.psi {
            *psi = v;
        }
        if let Some(v) = self.phi {
            *phi = v;
        }
    }

    fn optimizer(&self, iterations: &mut usize, tolerance: &mut f64, shrink: &mut f64) {
        if let Some(v) = self.max_iterations {
            *iterations = v;
        }
        if let Some(v) = self.relative_tolerance {
            *tolerance = v;
        }
        if let Some(v) = self.step_shrink {
            *shrink = v;
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CommandError> {
    match cli.command {
        Command::Sample { config, n, alpha, gamma, seed, draw, output } => {
            let mut cfg: SampleConfig = commands::load_config(config.as_deref())?;
            override_with!(cfg, plain: [n, alpha, gamma, seed, draw, output], optional: []);
            commands::cmd_sample(&cfg)
        }
        Command::Degrade { config, input, output, sigma, seed, draw } => {
            let mut cfg: DegradeConfig = commands::load_config(config.as_deref())?;
            override_with!(cfg, plain: [sigma, seed, draw], optional: [input, output]);
            commands::cmd_degrade(&cfg)
        }
        Command::Estimate { config, input, output, n, shrink, fit } => {
            let mut cfg: EstimateConfig = commands::load_config(config.as_deref())?;
            override_with!(cfg, plain: [], optional: [input, output, n, shrink]);
            fit.psi_phi(&mut cfg.psi, &mut cfg.phi);
            fit.optimizer(
                &mut cfg.max_iterations,
                &mut cfg.relative_tolerance,
                &mut cfg.step_shrink,
            );
            commands::cmd_estimate(&cfg)
        }
        Command::Denoise {
            config,
            input,
            output,
            alpha,
            beta,
            gamma,
            estimate_n,
            report,
            fit,
        } => {
            let mut cfg: DenoiseConfig = commands::load_config(config.as_deref())?;
            override_with!(
                cfg,
                plain: [],
                optional: [input, output, alpha, beta, gamma, estimate_n, report]
            );
            fit.psi_phi(&mut cfg.psi, &mut cfg.phi);
            fit.optimizer(
                &mut cfg.max_iterations,
                &mut cfg.relative_tolerance,
                &mut cfg.step_shrink,
            );
            commands::cmd_denoise(&cfg)
        }
        Command::Sweep { config, input, output, sigma, fractions, svg, fit } => {
            let mut cfg: SweepConfig = commands::load_config(config.as_deref())?;
            override_with!(cfg, plain: [sigma], optional: [input, svg]);
            if let Some(v) = output {
                cfg.output = v;
            }
            if let Some(v) = fractions {
                cfg.fractions = v;
            }
            fit.psi_phi(&mut cfg.psi, &mut cfg.phi);
            fit.optimizer(
                &mut cfg.max_iterations,
                &mut cfg.relative_tolerance,
                &mut cfg.step_shrink,
            );
            commands::cmd_sweep(&cfg)
        }
        #[cfg(feature = "validation")]
        Command::Validate => commands::cmd_validate(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => ExitCode::from(1),
        Err(CommandError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CommandError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
