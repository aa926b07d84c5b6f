//! Command-line definitions and their translation into simulation configs.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermsynth_core::{HurstVector, ProcessKind, SimulationConfig};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "hermsynth",
    version,
    about = "Wavelet synthesis of FBM, Rosenblatt and Hermite processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate paths and write one file per path plus a manifest.
    Generate(GenerateArgs),
    /// Run statistical and numerical checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Process {
    Fbm,
    Rosenblatt,
    Hermite3,
    Genhermite3,
}

impl From<Process> for ProcessKind {
    fn from(p: Process) -> Self {
        match p {
            Process::Fbm => ProcessKind::Fbm,
            Process::Rosenblatt => ProcessKind::Rosenblatt,
            Process::Hermite3 => ProcessKind::Hermite3,
            Process::Genhermite3 => ProcessKind::GenHermite3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by `generate` and `verify`.
#[derive(Clone, Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub process: Option<Process>,
    /// Self-similarity index H (equal h coordinates).
    #[arg(long, conflicts_with = "h")]
    pub hurst: Option<f64>,
    /// Comma-separated h coordinates.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub h: Option<Vec<f64>>,
    /// Scale J.
    #[arg(short = 'J', long = "scale")]
    pub scale: Option<u32>,
    /// Offset exponent a in (1/2, 1).
    #[arg(short = 'a', long = "offset", default_value_t = 0.75)]
    pub a: f64,
    /// Diagonal thickening exponent.
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    /// Horizon T.
    #[arg(short = 'T', long = "horizon", default_value_t = 1.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rescale equal-h processes to unit variance at t = 1.
    #[arg(long)]
    pub normalized: bool,
    /// FARIMA burn-in length (defaults to the generated span).
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Integral-table cache directory (overrides HERMSYNTH_CACHE_DIR).
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

impl ModelArgs {
    pub fn kind(&self) -> Result<ProcessKind, CliError> {
        self.process
            .map(Into::into)
            .ok_or_else(|| CliError::Usage("--process is required".into()))
    }

    /// Builds and validates a configuration. Without `-J` the scale comes from
    /// `default_scale`, or from the library default when that is `None`.
    pub fn config(
        &self,
        default_scale: Option<fn(ProcessKind) -> u32>,
    ) -> Result<SimulationConfig, CliError> {
        let kind = self.kind()?;
        let hurst = match (&self.hurst, &self.h) {
            (Some(h), None) => HurstVector::equal(kind.order(), *h),
            (None, Some(v)) => HurstVector::new(v.clone()),
            (None, None) => {
                return Err(CliError::Usage("one of --hurst or --h is required".into()))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("--hurst and --h are exclusive".into()))
            }
        }
        .map_err(CliError::usage)?;
        let mut cfg = SimulationConfig::new(kind, hurst)
            .map_err(CliError::usage)?
            .offset_exponent(self.a)
            .epsilon(self.epsilon)
            .horizon(self.horizon)
            .seed(self.seed)
            .normalized(self.normalized);
        match (self.scale, default_scale) {
            (Some(j), _) => cfg = cfg.scale(j),
            (None, Some(f)) => cfg = cfg.scale(f(kind)),
            (None, None) => {}
        }
        cfg.farima.burn_in = self.burn_in;
        cfg.validate().map_err(CliError::usage)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of paths; per-path seeds derive from --seed.
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Comma-separated evaluation times instead of the knots.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub grid: Option<Vec<f64>>,
    /// Regenerate the run described by a manifest and compare digests.
    #[arg(long, conflicts_with_all = ["process", "hurst", "h", "grid"])]
    pub rerun: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Deterministic oracle and property checks.
    Properties,
    /// Ensemble covariance against the FBM covariance.
    Covariance,
    /// Unit variance at t = 1 of the normalized process.
    Variance,
    /// Quadratic-variation Hurst recovery.
    Hurst,
    /// Decay of successive coupled-scale differences.
    Rate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Suite::Covariance)]
    pub suite: Suite,
    /// Monte Carlo paths for covariance and variance checks.
    #[arg(long, default_value_t = 500)]
    pub paths: usize,
    /// Seeds averaged in the Hurst check.
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Scales of the rate check.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [8u32, 9, 10, 11, 12, 13, 14])]
    pub scales: Vec<u32>,
    /// Grid points of the covariance check, equally spaced in (0, T].
    #[arg(long, default_value_t = 16)]
    pub grid_points: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}
