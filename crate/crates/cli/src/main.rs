//! `recon-ds` command-line front end.
//!
//! Exit codes: 0 on success or when every report passes, 1 when a
//! verification or decode fails, 2 on a usage error.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use recon_ds::Error;

use crate::args::{flag_of, Cli};

/// Versioned tag carried by every JSON document.
pub const SCHEMA: &str = "recon-ds/v1";

#[derive(Debug)]
pub enum Failure {
    /// Bad flag or input; exit code 2.
    Usage(String),
    /// A check or decode did not succeed; exit code 1. The message has
    /// already been reported when empty.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ParamOutOfRange { name, value, min, max } => {
                let range = if max == u64::MAX { format!("[{min}, ∞)") } else { format!("[{min}, {max}]") };
                Failure::Usage(format!("{} = {value} is outside the valid range {range}", flag_of(name)))
            }
            Error::TooLarge { n, cap } => Failure::Usage(format!(
                "--n = {n} is outside the valid range [1, {cap}] for this operation (RECON_DS_MAX_N raises the exhaustive cap)"
            )),
            Error::NoCandidate | Error::Ambiguous { .. } => Failure::Failed(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
