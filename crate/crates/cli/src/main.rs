//! `fovk`: generate problems, certify preconditioned operators, run solves,
//! scalability sweeps and bound comparisons.
//!
//! Exit codes:
//!
//! | code | meaning                                               |
//! |------|-------------------------------------------------------|
//! | 0    | success, verdict passed                               |
//! | 1    | verdict failed (certificate, convergence or bound)    |
//! | 2    | invalid arguments                                     |
//! | 3    | input or output error                                 |
//! | 4    | numerical failure                                     |
//! | 5    | operator exceeds the dense dimension guard            |
//!
//! `FOVK_THREADS` caps the number of worker threads.

mod args;
mod commands;
mod output;
mod problem;

use std::process::ExitCode;

use clap::Parser;
use fovk::Error;

use args::{Cli, Command};

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) => 2,
        Error::Io(_) | Error::Parse(_) => 3,
        Error::DimensionGuard { .. } => 5,
        _ => 4,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("FOVK_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::InvalidParams(format!("FOVK_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidParams(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Certify(a) => commands::certify(a),
        Command::Solve(a) => commands::solve(a),
        Command::Scalability(a) => commands::scalability(a),
        Command::Bounds(a) => commands::bounds(a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
