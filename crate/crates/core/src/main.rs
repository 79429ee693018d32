use std::process::ExitCode;

use clap::Parser;
use lorentz_qubits::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
