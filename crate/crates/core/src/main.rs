use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use unilrc::cli::{execute, Cli};

fn run() -> anyhow::Result<bool> {
    let outcome = execute(Cli::parse())?;
    std::io::stdout().write_all(outcome.stdout.as_bytes())?;
    Ok(outcome.success)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
