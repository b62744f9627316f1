use std::io::Write;
use std::process::ExitCode;

use serde::Serialize;

use progfree_core::bounds::{theorem_bound, Constant, DensityBound};

use crate::output::{float, sink};
use crate::{Cli, CliError, Format};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Universe size: `N`, `A..=B` or `A..B` (stepped by `--step`).
    #[arg(long, conflicts_with = "log2_n", required_unless_present = "log2_n")]
    pub n: Option<crate::Range>,
    /// log₂ N: `X` or `X..=Y` (stepped by `--step`); reaches far beyond 64-bit N.
    #[arg(long)]
    pub log2_n: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub deg: u32,
}

#[derive(Debug, Serialize)]
struct Row {
    #[serde(rename = "logN")]
    log_n: String,
    n: u32,
    corollary_density: String,
    theorem_density: String,
    base_density: String,
}

fn log2_points(args: &Args) -> Result<Vec<f64>, CliError> {
    if !(args.step > 0.0) {
        return Err(CliError::Invalid("--step must be positive".into()));
    }
    if let Some(r) = &args.n {
        let step = args.step.max(1.0) as u64;
        return Ok(std::iter::successors(Some(r.start), |&n| n.checked_add(step))
            .take_while(|&n| n <= r.end)
            .map(|n| (n.max(1) as f64).log2())
            .collect());
    }
    let spec = args.log2_n.as_deref().expect("clap requires --n or --log2-n");
    let num = |t: &str| {
        t.trim().parse::<f64>().map_err(|e| CliError::Invalid(format!("bad --log2-n {t:?}: {e}")))
    };
    let (start, end) = match spec.split_once("..=") {
        Some((a, b)) => (num(a)?, num(b)?),
        None => (num(spec)?, num(spec)?),
    };
    if !(start <= end) {
        return Err(CliError::Invalid(format!("empty log2 N range {start}..={end}")));
    }
    let count = ((end - start) / args.step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * args.step).collect())
}

fn cell(bound: Option<DensityBound>) -> String {
    bound.map_or(String::new(), |b| float(b.density()))
}

#[derive(Debug, Serialize)]
struct JsonBound {
    density: f64,
    log2_density: f64,
    /// `null` when the bound carries an unspecified factor C.
    constant: Option<f64>,
}

impl From<DensityBound> for JsonBound {
    fn from(b: DensityBound) -> Self {
        JsonBound {
            density: b.density(),
            log2_density: b.log2_density,
            constant: match b.constant {
                Constant::Symbolic => None,
                Constant::Explicit(c) => Some(c),
            },
        }
    }
}

#[derive(Debug, Serialize)]
struct JsonRow {
    log2_n: f64,
    k: usize,
    degree: u32,
    n: u32,
    exponent_coefficient: f64,
    corollary: JsonBound,
    theorem: Option<JsonBound>,
    r3: Option<JsonBound>,
    base_case: Option<JsonBound>,
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode, CliError> {
    let reports = log2_points(args)?
        .into_iter()
        .map(|x| theorem_bound(x, args.k, args.deg))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = sink(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for r in &reports {
                w.serialize(Row {
                    log_n: float(r.log2_n),
                    n: r.n,
                    corollary_density: float(r.corollary.density()),
                    theorem_density: cell(r.theorem),
                    base_density: cell(r.base_case),
                })?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<JsonRow> = reports
                .into_iter()
                .map(|r| JsonRow {
                    log2_n: r.log2_n,
                    k: r.k,
                    degree: r.degree,
                    n: r.n,
                    exponent_coefficient: r.exponent_coefficient,
                    corollary: r.corollary.into(),
                    theorem: r.theorem.map(Into::into),
                    r3: r.r3.map(Into::into),
                    base_case: r.base_case.map(Into::into),
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
