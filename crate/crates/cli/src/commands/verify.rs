use std::path::PathBuf;
use std::process::ExitCode;

use progfree_core::progressions::find_progressions;

use crate::{Cli, CliError, SetFile};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Set file to check.
    pub file: PathBuf,
}

pub fn run(_cli: &Cli, args: &Args) -> Result<ExitCode, CliError> {
    let file = SetFile::read(&args.file)?;
    let set = file.set()?;
    let (k, degree) = (file.k, file.degree);
    match find_progressions(&set, k, degree, Some(1))?.first() {
        None => {
            println!("no {k}-term {degree}-progressions in {} elements", set.len());
            Ok(ExitCode::SUCCESS)
        }
        Some(w) => {
            let terms: Vec<String> = w.terms.iter().map(ToString::to_string).collect();
            println!("progression ({}) of type {}", terms.join(", "), w.kind);
            Ok(ExitCode::from(1))
        }
    }
}
