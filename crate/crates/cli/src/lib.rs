//! Command-line front end for `sgq-core`.
//!
//! [`run`] parses arguments (merging an optional `--config` file), executes
//! one subcommand and writes its report atomically. The returned exit code
//! is 0 on success, 2 on invalid input and 3 when a numerical failure cut
//! the computation short; in the last case the partial report is still
//! written.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod report;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{expand_config, Cli};
use crate::error::CliError;

pub fn run<I: IntoIterator<Item = OsString>>(argv: I) -> ExitCode {
    let argv = match expand_config(argv.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => return report_error(e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(e),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let produced = commands::execute(&cli.command)?;
    let dest = cli.command.output().destination(cli.command.name());
    output::emit(dest.as_deref(), &produced.bytes)?;
    match produced.failure {
        Some(why) => Err(CliError::Numerical(why)),
        None => Ok(()),
    }
}

fn report_error(e: CliError) -> ExitCode {
    eprintln!("sgq: {e}");
    e.exit_code()
}
