use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cvqec_cli::args::Cli;
use cvqec_cli::error::CliError;
use cvqec_cli::execute;

fn write_output(cli: &Cli, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.global.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => match std::io::stdout().lock().write_all(bytes) {
            // A closed pipe (e.g. `| head`) is not an error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|run| {
        write_output(&cli, &run.bytes)?;
        Ok(run.violation)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(violation)) => {
            eprintln!("cvqec: invariant violation: {violation}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("cvqec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
