//! `twistlap`: spectra, bound verification and convergence studies for
//! twisted Dolbeault and Dirac operators.

mod cli;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::{CliError, EXIT_VIOLATION};

/// Environment variable limiting the worker threads (0 = automatic).
const THREADS_ENV: &str = "TWISTLAP_THREADS";

fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Usage(format!("{THREADS_ENV}: {e}"))),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a nonnegative integer, got '{s}'"))),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let outcome = match &cli.command {
        Command::Schema => {
            output::emit(output::SCHEMA.as_bytes(), cli.out.as_deref())?;
            return Ok(false);
        }
        Command::Spectrum(a) => commands::spectrum(a, cli.seed)?,
        Command::Verify(a) => commands::verify(a, cli.seed)?,
        Command::Convergence(a) => commands::convergence(a, cli.seed)?,
        Command::Oracle(o) => commands::oracle(o)?,
    };
    let bytes = outcome.document.render(cli.format)?;
    output::emit(&bytes, cli.out.as_deref())?;
    Ok(outcome.violation)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_count().and_then(|n| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?;
        pool.install(|| run(&cli))
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: at least one bound is violated");
            ExitCode::from(EXIT_VIOLATION)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
