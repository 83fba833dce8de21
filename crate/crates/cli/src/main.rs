use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod commands;
mod output;

use args::{Cli, Command};

/// Exit code 64, as in sysexits' EX_USAGE.
const USAGE_EXIT: u8 = 64;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Validation(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Usage(_) => USAGE_EXIT,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Numerical(m) => m,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Failure::Validation(format!("{}: {err}", path.display()))
    }
}

impl From<heun_su11::Error> for Failure {
    fn from(err: heun_su11::Error) -> Self {
        if err.is_numerical() {
            Failure::Numerical(err.to_string())
        } else {
            Failure::Validation(err.to_string())
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    /// The document was emitted but reports a failed check.
    Rejected,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_EXIT),
            };
        }
    };
    let result = match &cli.command {
        Command::Decompose(args) => commands::decompose(args),
        Command::Classify(args) => commands::classify(args),
        Command::Spectrum(args) => commands::spectrum(args),
        Command::Series(args) => commands::series(args),
        Command::Verify(args) => commands::verify(args),
        Command::CheckAlgebra(args) => commands::check_algebra(args),
    };
    match result {
        Ok(Outcome::Accepted) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
