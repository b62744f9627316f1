use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::ValueEnum;
use serde_json::{json, Value};

use progfree_core::bounds::theorem_bound;
use progfree_core::constructions::{
    base_case_dim, behrend_image_max, build_behrend_set, build_torus_set, choose_behrend_params,
    choose_z, delta_formula, plan_rankin, rankin_driver, AnnuliParams, ConstructionResult, Details,
    DriverOptions, InnerSource, TorusConfig, VerifyPolicy,
};
use progfree_core::rng::entropy_seed;

use crate::output::sink;
use crate::{Cli, CliError, Provenance, SetFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Behrend,
    Torus,
    Rankin,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Behrend => "behrend",
            Method::Torus => "torus",
            Method::Rankin => "rankin",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    pub method: Method,
    /// Universe size N.
    #[arg(long)]
    pub n: u64,
    /// Progression length.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Polynomial degree D.
    #[arg(long, default_value_t = 1)]
    pub deg: u32,
    /// Dimension d (torus, rankin top level, behrend).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Shell half-width δ (torus, rankin top level).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Digit bound P (behrend).
    #[arg(long)]
    pub p: Option<u64>,
    /// Sphere radius² (behrend); defaults to the fullest sphere.
    #[arg(long)]
    pub radius_sq: Option<u64>,
    /// Monte Carlo samples for choosing the shell offset z.
    #[arg(long, default_value_t = 20_000)]
    pub z_samples: usize,
    /// Run the exact detector even above the work budget.
    #[arg(long)]
    pub force_verify: bool,
}

fn largest_p(dim: u32, n: u64) -> Option<u64> {
    let fits = |p: u64| behrend_image_max(dim, p).is_some_and(|m| m <= n);
    if !fits(2) {
        return None;
    }
    let (mut lo, mut hi) = (2u64, n.saturating_add(2));
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn largest_dim(p: u64, n: u64) -> Option<u32> {
    (1..64u32).take_while(|&d| behrend_image_max(d, p).is_some_and(|m| m <= n)).last()
}

fn behrend(args: &Args, policy: &VerifyPolicy) -> Result<(ConstructionResult, BTreeMap<String, Value>), CliError> {
    if args.deg != 1 || args.k < 3 {
        return Err(CliError::Invalid(
            "Behrend sets avoid arithmetic progressions only: use --deg 1 and --k ≥ 3".into(),
        ));
    }
    let dim = args.dim.map(|d| d as u32);
    let (dim, p) = match (dim, args.p) {
        (Some(d), Some(p)) => (d, p),
        (Some(d), None) => (d, largest_p(d, args.n).ok_or_else(|| no_fit(args.n))?),
        (None, Some(p)) => (largest_dim(p, args.n).ok_or_else(|| no_fit(args.n))?, p),
        (None, None) => choose_behrend_params(args.n).ok_or_else(|| no_fit(args.n))?,
    };
    let res = build_behrend_set(args.n, dim, p, args.radius_sq, policy)?;
    let Details::Behrend(d) = &res.details else { unreachable!() };
    let params = BTreeMap::from([
        ("dim".to_string(), json!(d.dim)),
        ("p".to_string(), json!(d.p)),
        ("radius_sq".to_string(), json!(d.radius_sq)),
        ("radix".to_string(), json!(2 * d.p)),
    ]);
    Ok((res, params))
}

fn no_fit(n: u64) -> CliError {
    CliError::Invalid(format!("no Behrend digit map fits inside [{n}]"))
}

fn check_delta_override(delta: Option<f64>, n0: u64, degree: u32) -> Result<(), CliError> {
    if let Some(delta) = delta {
        let coupling = 2.0 * delta * n0 as f64;
        let limit = 4f64.powi(-(degree as i32));
        if !(delta > 0.0) || coupling > limit {
            return Err(CliError::Invalid(format!(
                "--delta {delta} violates the coupling constraint 2·δ·N0 ≤ 2^(-2D): 2·δ·N0 = {coupling} > {limit}"
            )));
        }
    }
    Ok(())
}

fn torus(args: &Args, seed: u64, policy: &VerifyPolicy) -> Result<(ConstructionResult, BTreeMap<String, Value>), CliError> {
    check_delta_override(args.delta, 1, args.deg)?;
    let log2_n = (args.n.max(2) as f64).log2();
    let dim = match args.dim {
        Some(d) => d,
        None => base_case_dim(log2_n, args.deg)?,
    };
    let delta = match args.delta {
        Some(d) => d,
        None => delta_formula(log2_n, args.deg, dim)?.min(0.5),
    };
    let params = AnnuliParams::single_shell(args.deg, delta, dim)?;
    let z = choose_z(&params, args.z_samples, seed)?;
    let cfg = TorusConfig::new(args.n, args.k, args.deg, params.with_z(z)?, seed)?;
    let res = build_torus_set(&cfg, policy)?;
    let Details::Torus(d) = &res.details else { unreachable!() };
    let out = BTreeMap::from([
        ("dim".to_string(), json!(dim)),
        ("delta".to_string(), json!(delta)),
        ("z".to_string(), json!(z)),
        ("n0".to_string(), json!(1)),
        ("inner_set".to_string(), json!([1])),
        ("z_samples".to_string(), json!(args.z_samples)),
        ("candidate_size".to_string(), json!(res.candidate_size)),
        ("removed".to_string(), json!(res.removed.len())),
        ("inner_verified".to_string(), json!(d.inner_verified)),
    ]);
    Ok((res, out))
}

fn inner_name(source: InnerSource) -> &'static str {
    match source {
        InnerSource::Single => "single",
        InnerSource::Exact => "exact",
        InnerSource::Recursive => "recursive",
    }
}

fn rankin(args: &Args, seed: u64, policy: &VerifyPolicy) -> Result<(ConstructionResult, BTreeMap<String, Value>), CliError> {
    let options = DriverOptions {
        verify: *policy,
        z_samples: args.z_samples,
        dim: args.dim,
        delta: args.delta,
        ..DriverOptions::default()
    };
    if args.delta.is_some() {
        let plan = plan_rankin(args.n, args.k, args.deg, &options)?;
        check_delta_override(args.delta, plan[0].n0, args.deg)?;
    }
    let res = rankin_driver(args.n, args.k, args.deg, seed, &options)?;
    let Details::Rankin(d) = &res.details else { unreachable!() };
    let levels: Vec<Value> = d
        .levels
        .iter()
        .map(|l| {
            json!({
                "n": l.plan.n,
                "degree": l.plan.degree,
                "dim": l.plan.dim,
                "delta": l.plan.delta,
                "n0": l.plan.n0,
                "n0_formula": l.plan.n0_formula,
                "inner_source": inner_name(l.plan.inner),
                "inner_size": l.inner_size,
                "z": l.z,
                "candidate_size": l.candidate_size,
                "size": l.size,
                "removed": l.removed,
                "certified": l.certified,
            })
        })
        .collect();
    let out = BTreeMap::from([
        ("levels".to_string(), Value::Array(levels)),
        ("z_samples".to_string(), json!(args.z_samples)),
        ("candidate_size".to_string(), json!(res.candidate_size)),
        ("removed".to_string(), json!(res.removed.len())),
    ]);
    Ok((res, out))
}

fn theory(n: u64, k: usize, degree: u32) -> String {
    if n < 2 {
        return "theory: n/a for N < 2".into();
    }
    match theorem_bound((n as f64).log2(), k, degree) {
        Ok(report) => {
            let mut s = format!(
                "theorem_density={:e}×C base_density={:e}",
                report.theorem.map_or(f64::NAN, |b| b.density()),
                report.base_case.map_or(f64::NAN, |b| b.density())
            );
            if let Some(r3) = report.r3 {
                s.push_str(&format!(" r3_density={:e}", r3.density()));
            }
            s
        }
        Err(e) => format!("theory: {e}"),
    }
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode, CliError> {
    if args.n == 0 {
        return Err(CliError::Invalid("--n must be at least 1".into()));
    }
    let policy = if args.force_verify { VerifyPolicy::forced() } else { VerifyPolicy::default() };
    let (seed, (result, parameters)) = match args.method {
        Method::Behrend => (None, behrend(args, &policy)?),
        Method::Torus => {
            let seed = cli.seed.unwrap_or_else(entropy_seed);
            (Some(seed), torus(args, seed, &policy)?)
        }
        Method::Rankin => {
            let seed = cli.seed.unwrap_or_else(entropy_seed);
            (Some(seed), rankin(args, seed, &policy)?)
        }
    };
    let provenance = Provenance { method: args.method.name().into(), seed, parameters };
    let file = SetFile::new(&result.set, args.k, args.deg, provenance, result.certified);

    let size = result.set.len();
    let density = result.set.density();
    let summary = format!(
        "method={} N={} k={} D={} size={size} density={density:e} log2_density={:.4} removed={} certified={} seed={} {}",
        args.method.name(),
        args.n,
        args.k,
        args.deg,
        density.log2(),
        result.removed.len(),
        result.certified,
        seed.map_or("none".into(), |s| s.to_string()),
        theory(args.n, args.k, args.deg),
    );
    match &cli.output {
        Some(path) => {
            file.write(path)?;
            println!("{summary}");
        }
        None => {
            let mut out = sink(None)?;
            out.write_all(file.to_canonical().as_bytes())?;
            out.flush()?;
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
