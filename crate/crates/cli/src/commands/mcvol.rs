use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use serde::{Deserialize, Serialize};

use progfree_core::bounds::mc_annuli_volume;
use progfree_core::constructions::{choose_z, AnnuliParams};
use progfree_core::rng::entropy_seed;
use progfree_core::IntSet;

use crate::output::sink;
use crate::{Cli, CliError, Format};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub deg: u32,
    /// Annuli description: `{"inner_set": [...], "n0": N0, "delta": δ, "z": z}`
    /// (`z` optional). Without it: one shell with `--delta` and `--z`.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Shell offset in units of σ_D; chosen by Monte Carlo when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    inner_set: Vec<u64>,
    n0: u64,
    delta: f64,
    #[serde(default)]
    z: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Report {
    dim: usize,
    degree: u32,
    inner_set: Vec<u64>,
    n0: u64,
    delta: f64,
    z: f64,
    z_chosen: bool,
    samples: usize,
    seed: u64,
    relative_volume: f64,
    std_error: f64,
    /// `(2/5)·|A₀|·δ`.
    lemma3_lower_bound: f64,
    /// Normal approximation `Σ 2δ·φ(z − (a−1)/N₀)`.
    clt_prediction: f64,
}

#[derive(Debug, Serialize)]
struct CsvRow {
    dim: usize,
    degree: u32,
    inner_set: String,
    n0: u64,
    delta: f64,
    z: f64,
    z_chosen: bool,
    samples: usize,
    seed: u64,
    relative_volume: f64,
    std_error: f64,
    lemma3_lower_bound: f64,
    clt_prediction: f64,
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode, CliError> {
    let spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|source| CliError::Read { path: path.clone(), source })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Invalid(format!("annuli spec {}: {e}", path.display())))?
        }
        None => SpecFile { inner_set: vec![1], n0: 1, delta: args.delta, z: args.z },
    };
    let seed = cli.seed.unwrap_or_else(entropy_seed);
    let inner = IntSet::from_unsorted(spec.n0, spec.inner_set.clone())?;
    let params = AnnuliParams::new(inner, spec.n0, args.deg, spec.delta, args.dim)?;
    let (z, z_chosen) = match spec.z.or(args.z) {
        Some(z) => (z, false),
        None => (choose_z(&params, args.samples, seed)?, true),
    };
    let annuli = params.with_z(z)?;
    let est = mc_annuli_volume(&annuli, args.samples, seed)?;
    let members = annuli.params().inner_set.members().to_vec();
    let clt = members
        .iter()
        .map(|&a| {
            let c = z - (a - 1) as f64 / spec.n0 as f64;
            2.0 * spec.delta * (-c * c / 2.0).exp() / (2.0 * PI).sqrt()
        })
        .sum();
    let report = Report {
        dim: args.dim,
        degree: args.deg,
        lemma3_lower_bound: 0.4 * members.len() as f64 * spec.delta,
        inner_set: members,
        n0: spec.n0,
        delta: spec.delta,
        z,
        z_chosen,
        samples: est.samples,
        seed,
        relative_volume: est.relative_volume,
        std_error: est.std_error,
        clt_prediction: clt,
    };

    let mut out = sink(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.serialize(CsvRow {
                dim: report.dim,
                degree: report.degree,
                inner_set: report.inner_set.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                n0: report.n0,
                delta: report.delta,
                z: report.z,
                z_chosen: report.z_chosen,
                samples: report.samples,
                seed: report.seed,
                relative_volume: report.relative_volume,
                std_error: report.std_error,
                lemma3_lower_bound: report.lemma3_lower_bound,
                clt_prediction: report.clt_prediction,
            })?;
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
