use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = rectgf_cli::args::Cli::parse();
    ExitCode::from(rectgf_cli::run(&cli))
}
