//! `cubeharm`: command-line access to the coefficient routes, generating
//! polynomials, invariants and verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! domain errors.

mod args;
mod commands;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(cubeharm::Error),
    Io(io::Error),
}

impl From<cubeharm::Error> for CliError {
    fn from(e: cubeharm::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    match &cli.command {
        Command::Coeff(a) => commands::coeff(a, cli.format),
        Command::Table(a) => commands::table(a, cli.format),
        Command::Gen(a) => commands::gen(a, cli.format),
        Command::Bernoulli(a) => commands::bernoulli(a, cli.format),
        Command::Invariant(a) => commands::invariant(a, cli.format),
        Command::Verify { what } => commands::verify(what, cli.format),
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(CliError::Io),
        None => io::stdout().write_all(body.as_bytes()).map_err(CliError::Io),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cubeharm: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &outcome.body) {
        eprintln!("cubeharm: {e}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
