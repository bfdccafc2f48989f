//! `cdwlab` command-line front end.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

pub use commands::{execute, Outcome};
pub use config::{parse_config, CliError, RunConfig, CONFIG_ENV};

/// Parses, runs and reports; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let result = parse_config(argv, env).and_then(|cfg| execute(&cfg));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary_text());
            0
        }
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(e @ CliError::Usage(_)) => {
            eprintln!("{e}");
            e.exit_code()
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error[{}]: {e}", e.category());
            1
        }
    }
}
