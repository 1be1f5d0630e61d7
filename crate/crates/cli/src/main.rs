mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use sand_core::SandError;

use args::{Cli, Command};

fn exit_code(err: &SandError) -> u8 {
    match err {
        SandError::CapExceeded { .. } => 4,
        SandError::Io(_) | SandError::Checkpoint(_) | SandError::Json(_) => 3,
        SandError::Verification(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Table1(a) => commands::table1(a),
        Command::Estimators(a) => commands::estimators(a),
        Command::Theta(a) => commands::theta(a),
        Command::Numbers(a) => commands::numbers(a),
        Command::Fluct(a) => commands::fluct(a),
        Command::List(a) => commands::list(a),
        Command::Constants(a) => commands::constants(a),
        Command::Merge(a) => commands::merge(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sand: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
