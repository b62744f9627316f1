use std::process::ExitCode;

use clap::Parser;
use progfree_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("progfree: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
