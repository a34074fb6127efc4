mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Angles(a) => commands::angles(&cli, a),
        Command::Simulate(a) => commands::simulate(&cli, a),
        Command::Grid(a) => commands::grid(&cli, a),
        Command::VerifyAll(a) => commands::verify_all(&cli, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("nbilliard: {f}");
            ExitCode::from(match f {
                Failure::Usage(_) => 2,
                Failure::Degenerate(_) => 3,
                Failure::Io(_) => 4,
            })
        }
    }
}
