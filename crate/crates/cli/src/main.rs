//! `heatlab`: reproducible heat content experiments.
//!
//! Exit codes: 0 success, 1 runtime or numerical failure (including failed
//! validation criteria), 2 usage error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod spec;

use std::process::ExitCode;

use clap::Parser;

use spec::Command;

#[derive(Debug, Parser)]
#[command(name = "heatlab", version, about = "Spectral heat content of subordinate Brownian motion on an interval")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
    /// Validation ran but some criteria failed; the report was written.
    Criteria,
}

impl From<heatlab::Error> for Failure {
    fn from(e: heatlab::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Criteria) => ExitCode::from(1),
    }
}
