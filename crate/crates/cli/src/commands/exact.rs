use std::io::Write;
use std::process::ExitCode;

use serde::Serialize;

use progfree_core::exactsolver::{ExactSolver, DEFAULT_BUDGET};
use progfree_core::Error;

use crate::output::sink;
use crate::{Cache, CacheEntry, Cli, CliError, Format, Range};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `N`, `A..=B` or `A..B`.
    #[arg(long)]
    pub n: Range,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub deg: u32,
    /// Search nodes allowed per value of N.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Neither read nor update the cache.
    #[arg(long)]
    pub no_cache: bool,
}

/// One output row. `kind` is `exact`, or `lower_bound` when the search
/// budget ran out and `r` is only the best size found.
#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
struct Row {
    #[serde(rename = "N")]
    n: u64,
    k: usize,
    #[serde(rename = "D")]
    degree: u32,
    r: usize,
    witness: String,
    kind: &'static str,
}

fn witness_text(members: &[u64]) -> String {
    members.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode, CliError> {
    let mut cache = if args.no_cache { None } else { Some(Cache::open(Cache::default_path())?) };
    let mut solver = ExactSolver::with_budget(args.k, args.deg, args.budget)?;
    let mut rows = Vec::new();
    let mut fresh = Vec::new();
    let mut hits = 0;
    let mut lower: Option<(usize, Vec<u64>)> = None;

    for n in args.n.iter() {
        let row = |r: usize, witness: &[u64], kind| Row {
            n,
            k: args.k,
            degree: args.deg,
            r,
            witness: witness_text(witness),
            kind,
        };
        if let Some(entry) = cache.as_ref().and_then(|c| c.get(n, args.k, args.deg)) {
            hits += 1;
            rows.push(row(entry.value, &entry.witness, "exact"));
            continue;
        }
        if let Some((r, witness)) = &lower {
            rows.push(row(*r, witness, "lower_bound"));
            continue;
        }
        match solver.solve(n) {
            Ok(record) => {
                rows.push(row(record.value, record.witness.members(), "exact"));
                fresh.push(CacheEntry::from_record(record));
            }
            Err(Error::BudgetExceeded { lower_bound, witness, .. }) => {
                rows.push(row(lower_bound, witness.members(), "lower_bound"));
                lower = Some((lower_bound, witness.into_members()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(cache) = cache.as_mut() {
        cache.store(&fresh)?;
        eprintln!("cache: {hits} hits, {} new entries", fresh.len());
    }

    let mut out = sink(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
