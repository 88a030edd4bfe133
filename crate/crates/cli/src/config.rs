use cvqec::shor9::{CodeConfig, ErrorModel, FeedforwardPolicy};
use cvqec::units::{db_to_nepers, nepers_to_db};
use cvqec::Squeezing;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command, ErrorModelArg};
use crate::error::{CliError, CliResult};

/// Everything that determines a command's output. Hashed into the
/// provenance block, so worker count is deliberately absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub seed: u64,
    pub trials: u64,
    /// Squeezing below shot noise per ancilla, `r = dB·ln10/20`.
    pub squeezing_db: [f64; 8],
    pub squeezing_r: [f64; 8],
    pub channel: Option<usize>,
    pub error_model: ErrorModelArg,
    pub error_amp: f64,
    pub error_phase: f64,
    pub policy: FeedforwardPolicy,
    pub threshold_sigma: f64,
    pub correct: bool,
    pub three_mode: Option<ThreeModeGrid>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeModeGrid {
    pub gamma: Vec<f64>,
    pub xbar2: Vec<f64>,
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub trials: u64,
    /// SHA-256 of the JSON-serialized run configuration.
    pub config_hash: String,
    pub version: &'static str,
}

fn expand(values: &[f64], what: &str) -> CliResult<Option<[f64; 8]>> {
    match values.len() {
        0 => Ok(None),
        1 => Ok(Some([values[0]; 8])),
        8 => Ok(Some(values.try_into().expect("length checked"))),
        n => Err(CliError::Config(format!("{what} takes one value or eight, got {n}"))),
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let g = &cli.global;
        let (command, three_mode) = match &cli.command {
            Command::Table2 => ("table2", None),
            Command::Syndrome => ("syndrome", None),
            Command::Fidelity => ("fidelity", None),
            Command::Trial => ("trial", None),
            Command::ThreeMode(a) => {
                ("three-mode", Some(ThreeModeGrid { gamma: a.gamma.clone(), xbar2: a.xbar2.clone(), r: a.r.clone() }))
            }
            Command::Witness => ("witness", None),
            Command::LedgerCheck => ("ledger-check", None),
        };
        let (squeezing_db, squeezing_r) =
            match (expand(&g.squeezing_db, "--squeezing-db")?, expand(&g.squeezing_r, "--squeezing-r")?) {
                (Some(db), _) => (db, db.map(db_to_nepers)),
                (None, Some(r)) => (r.map(nepers_to_db), r),
                (None, None) => ([0.0; 8], [0.0; 8]),
            };
        Squeezing(squeezing_r).validate()?;
        let cfg = RunConfig {
            command,
            seed: g.seed,
            trials: g.trials,
            squeezing_db,
            squeezing_r,
            channel: g.channel,
            error_model: g.error_model,
            error_amp: g.error_amp,
            error_phase: g.error_phase,
            policy: g.policy.into(),
            threshold_sigma: g.threshold_sigma,
            correct: !g.no_correction,
            three_mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if let Some(c) = self.channel {
            if !(1..=9).contains(&c) {
                return Err(CliError::Config(format!("--channel must be in 1..9, got {c}")));
            }
        }
        if !(self.error_amp.is_finite() && self.error_amp >= 0.0) {
            return Err(CliError::Config(format!("--error-amp must be finite and >= 0, got {}", self.error_amp)));
        }
        if !self.error_phase.is_finite() {
            return Err(CliError::Config("--error-phase must be finite".into()));
        }
        if !(self.threshold_sigma.is_finite() && self.threshold_sigma > 0.0) {
            return Err(CliError::Config("--threshold-sigma must be positive".into()));
        }
        if matches!(self.command, "syndrome" | "trial") && self.trials == 0 {
            return Err(CliError::Config(format!("{} needs --trials > 0", self.command)));
        }
        if let Some(grid) = &self.three_mode {
            if grid.gamma.is_empty() || grid.xbar2.is_empty() || grid.r.is_empty() {
                return Err(CliError::Config("three-mode grids must not be empty".into()));
            }
            if let Some(r) = grid.r.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
                return Err(CliError::Config(format!("--r values must be finite and >= 0, got {r}")));
            }
        }
        Ok(())
    }

    pub fn squeezing(&self) -> Squeezing {
        Squeezing(self.squeezing_r)
    }

    pub fn error(&self, channel: usize) -> ErrorModel {
        match self.error_model {
            ErrorModelArg::Fixed => ErrorModel::polar(channel, self.error_amp, self.error_phase),
            ErrorModelArg::RandomPhase => ErrorModel::RandomPhase { channel, amplitude: self.error_amp },
        }
    }

    pub fn code_config(&self, channel: usize) -> CodeConfig {
        CodeConfig {
            squeezing: self.squeezing(),
            error: self.error(channel),
            policy: self.policy,
            threshold_sigma: self.threshold_sigma,
            correct: self.correct,
        }
    }

    /// Selected channel, or all nine.
    pub fn channels(&self) -> Vec<usize> {
        self.channel.map_or_else(|| (1..=9).collect(), |c| vec![c])
    }

    /// Seed for channel `c` in multi-channel runs, so that a single-channel
    /// run of channel `c` reproduces the same trials.
    pub fn channel_seed(&self, channel: usize) -> u64 {
        self.seed.wrapping_add(channel as u64 - 1)
    }

    pub fn provenance(&self) -> CliResult<Provenance> {
        let bytes = serde_json::to_vec(self)?;
        Ok(Provenance {
            seed: self.seed,
            trials: self.trials,
            config_hash: hex::encode(Sha256::digest(&bytes)),
            version: env!("CARGO_PKG_VERSION"),
        })
    }
}
