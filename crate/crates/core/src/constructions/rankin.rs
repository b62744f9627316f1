use super::annuli::{choose_z, AnnuliParams};
use super::params::{base_case_dim, delta_formula, inductive_dim, n0_formula};
use super::torus::{build_torus_set, ConstructionResult, Details, TorusConfig, TorusDetails, VerifyPolicy};
use crate::bounds::ceil_log2_ratio;
use crate::exactsolver::{ExactSolver, MAX_N};
use crate::rng::derive_seed;
use crate::{Error, IntSet, Result};

/// Below this value of the `N₀` formula the shell index set comes from the
/// exact solver instead of another level of recursion.
const EXACT_FLOOR: f64 = 8.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DriverOptions {
    pub verify: VerifyPolicy,
    /// Monte Carlo samples per level for [`choose_z`].
    pub z_samples: usize,
    /// Overrides the scheduled dimension at the top level.
    pub dim: Option<usize>,
    /// Overrides the scheduled `δ` at the top level.
    pub delta: Option<f64>,
    /// Node budget for the exact solver at the recursion floor.
    pub exact_budget: u64,
}

impl Default for DriverOptions {
    fn default() -> Self {
        DriverOptions {
            verify: VerifyPolicy::default(),
            z_samples: 20_000,
            dim: None,
            delta: None,
            exact_budget: 5_000_000,
        }
    }
}

/// Where a level gets its shell index set `A₀ ⊆ [N₀]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerSource {
    /// Base case: one shell, `A₀ = {1}`, `N₀ = 1`.
    Single,
    /// Optimal set from the exact solver.
    Exact,
    /// Another driver level with degree `2D`.
    Recursive,
}

/// Parameters of one level, fixed before any randomness is drawn.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelPlan {
    pub n: u64,
    pub k: usize,
    pub degree: u32,
    pub dim: usize,
    pub delta: f64,
    pub n0: u64,
    /// Unrounded `N₀` formula, for inductive levels.
    pub n0_formula: Option<f64>,
    pub inner: InnerSource,
}

impl LevelPlan {
    /// `2δN₀`.
    pub fn coupling(&self) -> f64 {
        2.0 * self.delta * self.n0 as f64
    }
}

/// Schedules one level. `top` enables the dimension/δ overrides.
pub fn plan_level(n: u64, k: usize, degree: u32, options: &DriverOptions, top: bool) -> Result<LevelPlan> {
    if n == 0 {
        return Err(Error::InvalidParameters("N must be at least 1".into()));
    }
    if degree == 0 || k <= 2 * degree as usize {
        return Err(Error::Unsupported { k, degree });
    }
    // formulas need N ≥ 2; [1] is scheduled like [2]
    let log2_n = (n.max(2) as f64).log2();
    let (dim_override, delta_override) = if top { (options.dim, options.delta) } else { (None, None) };
    let pick_delta = |dim: usize| match delta_override {
        Some(delta) => Ok(delta),
        None => delta_formula(log2_n, degree, dim),
    };
    let base = |dim: Option<usize>| -> Result<LevelPlan> {
        let dim = match dim_override.or(dim) {
            Some(dim) => dim,
            None => base_case_dim(log2_n, degree)?,
        };
        // a single shell never overlaps itself; wider than 1/2 buys nothing
        let delta = pick_delta(dim)?.min(0.5);
        Ok(LevelPlan { n, k, degree, dim, delta, n0: 1, n0_formula: None, inner: InnerSource::Single })
    };

    let n_levels = ceil_log2_ratio(k, degree);
    if k <= 4 * degree as usize || n < 4 {
        return base(None);
    }
    let dim = match dim_override {
        Some(dim) => dim,
        None => inductive_dim(log2_n, degree, n_levels - 1)?,
    };
    let delta = pick_delta(dim)?;
    let raw = n0_formula(log2_n, degree, dim)?;
    // largest N₀ the shells allow, then keep 2δN₀ within a factor 4 of it
    let ceiling = (4f64.powi(-(degree as i32)) / (2.0 * delta)).floor();
    if !(ceiling >= 1.0) || !raw.is_finite() {
        return base(Some(dim));
    }
    let floor = (ceiling / 4.0).ceil().max(1.0);
    let n0 = raw.floor().clamp(floor, ceiling) as u64;
    let inner = if raw < EXACT_FLOOR && n0 <= MAX_N {
        InnerSource::Exact
    } else {
        InnerSource::Recursive
    };
    Ok(LevelPlan { n, k, degree, dim, delta, n0, n0_formula: Some(raw), inner })
}

/// All levels from the top down.
pub fn plan_rankin(n: u64, k: usize, degree: u32, options: &DriverOptions) -> Result<Vec<LevelPlan>> {
    let mut plans = vec![plan_level(n, k, degree, options, true)?];
    while let Some(last) = plans.last().filter(|p| p.inner == InnerSource::Recursive) {
        let next = plan_level(last.n0, k, 2 * last.degree, options, false)?;
        plans.push(next);
    }
    Ok(plans)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelRecord {
    pub plan: LevelPlan,
    pub z: f64,
    pub inner_size: usize,
    pub candidate_size: usize,
    pub size: usize,
    pub removed: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankinDetails {
    /// Top level first.
    pub levels: Vec<LevelRecord>,
    pub top: TorusDetails,
}

fn exact_inner(plan: &LevelPlan, budget: u64) -> Result<IntSet> {
    let mut solver = ExactSolver::with_budget(plan.k, 2 * plan.degree, budget)?;
    match solver.solve(plan.n0) {
        Ok(record) => Ok(record.witness.clone()),
        Err(Error::BudgetExceeded { witness, .. }) => Ok(witness),
        Err(e) => Err(e),
    }
}

fn run_level(plan: &LevelPlan, inner: IntSet, seed: u64, options: &DriverOptions) -> Result<(ConstructionResult, LevelRecord)> {
    let inner_size = inner.len();
    let params = AnnuliParams::new(inner, plan.n0, plan.degree, plan.delta, plan.dim)?;
    let z = choose_z(&params, options.z_samples, seed)?;
    let cfg = TorusConfig::new(plan.n, plan.k, plan.degree, params.with_z(z)?, seed)?;
    let result = build_torus_set(&cfg, &options.verify)?;
    let record = LevelRecord {
        plan: plan.clone(),
        z,
        inner_size,
        candidate_size: result.candidate_size,
        size: result.set.len(),
        removed: result.removed.len(),
        certified: result.certified,
    };
    Ok((result, record))
}

/// Builds a set in `[N]` free of k-term D-progressions by the recursive
/// torus construction: each level's shells are indexed by a set free of
/// k-term `2D`-progressions built one level down, until `4D ≥ k` allows a
/// single shell.
pub fn rankin_driver(n: u64, k: usize, degree: u32, seed: u64, options: &DriverOptions) -> Result<ConstructionResult> {
    let plans = plan_rankin(n, k, degree, options)?;
    let mut inner: Option<IntSet> = None;
    let mut records = Vec::with_capacity(plans.len());
    let mut top = None;
    for (depth, plan) in plans.iter().enumerate().rev() {
        let level_seed = if depth == 0 { seed } else { derive_seed(seed, depth as u64) };
        let a0 = match (plan.inner, inner.take()) {
            (InnerSource::Single, _) => IntSet::new(plan.n0, vec![1])?,
            (InnerSource::Exact, _) => exact_inner(plan, options.exact_budget)?,
            (InnerSource::Recursive, Some(set)) if !set.is_empty() => set,
            // an empty level below still leaves the single-shell index set
            (InnerSource::Recursive, _) => IntSet::new(plan.n0, vec![1])?,
        };
        let (result, record) = run_level(plan, a0, level_seed, options)?;
        records.push(record);
        if depth == 0 {
            top = Some(result);
        } else {
            inner = Some(result.set);
        }
    }
    records.reverse();
    let top = top.expect("the plan has a top level");
    let Details::Torus(details) = top.details else {
        unreachable!("torus levels carry torus details")
    };
    Ok(ConstructionResult {
        set: top.set,
        candidate_size: top.candidate_size,
        removed: top.removed,
        certified: top.certified,
        details: Details::Rankin(Box::new(RankinDetails { levels: records, top: *details })),
    })
}
