use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "cvqec", version, about = "Continuous-variable quantum error correction simulator")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Base seed; trial i uses stream i of a ChaCha generator seeded with it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo trials per configuration (0 = closed forms only where supported).
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Ancilla squeezing below shot noise in dB: one value for all eight
    /// ancillas or eight comma-separated values.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "squeezing_r")]
    pub squeezing_db: Vec<f64>,
    /// Ancilla squeezing parameters r in nepers (same shape as --squeezing-db).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub squeezing_r: Vec<f64>,
    /// Channel hit by the error (1..9). Sweeping commands default to all nine.
    #[arg(long, global = true)]
    pub channel: Option<usize>,
    /// Error displacement magnitude in shot-noise units.
    #[arg(long, global = true, default_value_t = 20.0)]
    pub error_amp: f64,
    /// Error phase in radians from the x axis (fixed model only).
    #[arg(long, global = true, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub error_phase: f64,
    #[arg(long, global = true, value_enum, default_value_t = ErrorModelArg::Fixed)]
    pub error_model: ErrorModelArg,
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Single)]
    pub policy: PolicyArg,
    /// Detector threshold in standard deviations of its error-free output.
    #[arg(long, global = true, default_value_t = cvqec::shor9::DEFAULT_THRESHOLD_SIGMA)]
    pub threshold_sigma: f64,
    /// Measure the syndrome but apply no feedforward.
    #[arg(long, global = true)]
    pub no_correction: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Output noise power per channel and quadrature, closed form and Monte Carlo.
    Table2,
    /// Sampled detector outputs and verdicts for errors on each channel.
    Syndrome,
    /// Fidelity per channel, closed form and Monte Carlo.
    Fidelity,
    /// Per-trial records for one channel.
    Trial,
    /// Three-mode code under stochastic displacement channels.
    ThreeMode(ThreeModeArgs),
    /// Nullifiers, logical quadratures and inseparability witnesses.
    Witness,
    /// Compare computed network coefficients with the printed ones.
    LedgerCheck,
}

#[derive(Debug, Clone, Args)]
pub struct ThreeModeArgs {
    /// Error probability per channel.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.3])]
    pub gamma: Vec<f64>,
    /// Error displacement in x.
    #[arg(long, value_delimiter = ',', default_values_t = [5.0, 10.0])]
    pub xbar2: Vec<f64>,
    /// Ancilla squeezing parameters in nepers.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0, 3.0, 6.0])]
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorModelArg {
    Fixed,
    RandomPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Single,
    Optimal,
}

impl From<PolicyArg> for cvqec::shor9::FeedforwardPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Single => cvqec::shor9::FeedforwardPolicy::Single,
            PolicyArg::Optimal => cvqec::shor9::FeedforwardPolicy::Optimal,
        }
    }
}
