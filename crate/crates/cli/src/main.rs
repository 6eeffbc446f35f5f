use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    dcqd_cli::run(dcqd_cli::Cli::parse())
}
