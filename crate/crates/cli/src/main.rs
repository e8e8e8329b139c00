mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::NumericError;

/// 2 for invalid input, 3 when the numerics fail.
fn exit_code(error: &anyhow::Error) -> u8 {
    for cause in error.chain() {
        if cause.is::<NumericError>() {
            return 3;
        }
        if let Some(seqroctm::Error::ChainOrder(_)) = cause.downcast_ref::<seqroctm::Error>() {
            return 3;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Estimate { method } => commands::estimate(method),
        Command::Champions(a) => commands::champions(a),
        Command::Tune(a) => commands::tune(a),
        Command::ExportDot(a) => commands::export_dot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
