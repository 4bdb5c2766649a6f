mod args;
mod commands;
mod error;
mod problem_file;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use infolab::limits::CAP_ENV;

use crate::args::Cli;
use crate::error::{CliError, Status};

fn check_cap_env() -> Result<(), CliError> {
    match std::env::var(CAP_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => Ok(()),
            _ => Err(CliError::Config(format!(
                "{CAP_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::Config(format!("{CAP_ENV}: {e}"))),
    }
}

fn execute(cli: &Cli) -> Result<Status, CliError> {
    check_cap_env()?;
    let (report, status) = commands::dispatch(&cli.command, &cli.output)?;
    report.emit(&cli.output)?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match execute(&cli) {
        Ok(Status::Ok) => Status::Ok.exit_code(),
        Ok(status) => {
            let reason = match status {
                Status::ToleranceBreach => "tolerance breach",
                _ => "optimizer did not converge",
            };
            eprintln!("warning: {reason}; report written");
            status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    code
}
