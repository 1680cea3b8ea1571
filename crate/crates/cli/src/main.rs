use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(crossstitch::main_with(crossstitch::Cli::parse()))
}
