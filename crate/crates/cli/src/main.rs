//! `eigenanchor` command-line tool.
//!
//! Exit codes: 0 success, 2 argument error, 3 data error, 4 numeric error.

mod commands;

use std::process::ExitCode;

use clap::Parser;

use commands::{Cli, UsageError};
use eigenanchor::ErrorClass;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<eigenanchor::Error>() {
            return match e.class() {
                ErrorClass::Argument => 2,
                ErrorClass::Data => 3,
                ErrorClass::Numeric => 4,
            };
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
