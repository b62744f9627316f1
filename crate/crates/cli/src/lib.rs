//! `progfree`: build, verify and measure progression-free sets.

mod cache;
mod commands;
mod error;
mod output;
mod range;
pub mod setfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub use cache::{Cache, CacheEntry};
pub use error::CliError;
pub use range::Range;
pub use setfile::{Provenance, SetFile, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "progfree", version, about = "Sets free of polynomial progressions")]
pub struct Cli {
    /// Seed for every random choice; drawn from system entropy and recorded when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Table format for `exact`, `bounds` and `mcvol`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a progression-free set and write it as a set file.
    Construct(commands::construct::Args),
    /// Check a set file for k-term D-progressions (exit 0: none, 1: found, 2: bad input).
    Verify(commands::verify::Args),
    /// Exact r_{k,D}(N) for small N, with a results cache.
    Exact(commands::exact::Args),
    /// Closed-form density lower bounds.
    Bounds(commands::bounds::Args),
    /// Monte Carlo volume of an annuli set.
    Mcvol(commands::mcvol::Args),
}

pub fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Construct(args) => commands::construct::run(cli, args),
        Command::Verify(args) => commands::verify::run(cli, args),
        Command::Exact(args) => commands::exact::run(cli, args),
        Command::Bounds(args) => commands::bounds::run(cli, args),
        Command::Mcvol(args) => commands::mcvol::run(cli, args),
    }
}
