//! Command-line harness around the `cvqec` simulator.
//!
//! [`execute`] runs one parsed command line and returns the rendered bytes,
//! which is what the binary and the tests both use.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use args::{Cli, Command};
use config::RunConfig;
use error::{CliError, CliResult};
use output::Report;

/// Output of one invocation.
#[derive(Debug, Clone)]
pub struct Execution {
    pub bytes: Vec<u8>,
    /// Invariant violation found by the command, if any (exit code 3).
    pub violation: Option<String>,
}

pub fn run_command(cli: &Cli, cfg: &RunConfig) -> CliResult<Report> {
    match cli.command {
        Command::Table2 => commands::table2(cfg),
        Command::Syndrome => commands::syndrome(cfg),
        Command::Fidelity => commands::fidelity(cfg),
        Command::Trial => commands::trial(cfg),
        Command::ThreeMode(_) => commands::three_mode(cfg),
        Command::Witness => commands::witness(cfg),
        Command::LedgerCheck => commands::ledger(cfg),
    }
}

pub fn execute(cli: &Cli) -> CliResult<Execution> {
    let cfg = RunConfig::from_cli(cli)?;
    let report = match cli.global.threads {
        Some(0) => return Err(CliError::Config("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| run_command(cli, &cfg))?,
        None => run_command(cli, &cfg)?,
    };
    Ok(Execution { bytes: output::render(&report, &cfg, cli.global.format)?, violation: report.violation })
}
