mod args;
mod commands;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(usize),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Verification(n) => write!(f, "{n} verification check(s) failed"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
        }
    }
}

impl From<olo_core::Error> for CliError {
    fn from(e: olo_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn run(command: Command) -> Result<(), CliError> {
    let flags = command.flags().clone().with_config()?;
    match command {
        Command::Value(_) => commands::value(&flags),
        Command::Play(_) => commands::play(&flags),
        Command::Verify(_) => commands::verify(&flags),
        Command::Bet(_) => commands::bet(&flags),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("olo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
