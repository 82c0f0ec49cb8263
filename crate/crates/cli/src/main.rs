//! `topowire` command-line driver.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 invalid configuration,
//! 3 numerical guard (step size, drift, undefined invariant, ...).

mod commands;
mod config;
mod emit;
mod error;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.command)?;
    let report = commands::run(&cfg)?;
    let text = emit::render(&cfg, &report)?;
    emit::write(&cfg, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("topowire: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
