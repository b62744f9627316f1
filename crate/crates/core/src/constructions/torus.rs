use rand::RngCore;
use rayon::prelude::*;

use super::annuli::{annuli_contains, AnnuliSpec, TorusPoint};
use super::behrend::BehrendDetails;
use super::rankin::RankinDetails;
use crate::progressions::{detection_cost, find_progressions, has_progression};
use crate::rng::{self, substream};
use crate::{Error, IntSet, ProgressionType, Result};

/// When to run the exact detector on a candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyPolicy {
    /// Largest admissible `|A|^(D+1)·k`.
    pub budget: u128,
    /// Verify regardless of the budget.
    pub force: bool,
}

impl Default for VerifyPolicy {
    fn default() -> Self {
        VerifyPolicy { budget: 1_000_000_000, force: false }
    }
}

impl VerifyPolicy {
    pub fn forced() -> Self {
        VerifyPolicy { force: true, ..Self::default() }
    }

    pub fn allows(&self, len: usize, k: usize, degree: u32) -> bool {
        self.force || detection_cost(len, k, degree) <= self.budget
    }
}

/// Everything that determines one torus construction.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusConfig {
    pub n: u64,
    pub k: usize,
    pub degree: u32,
    pub annuli: AnnuliSpec,
    pub seed: u64,
}

impl TorusConfig {
    pub fn new(n: u64, k: usize, degree: u32, annuli: AnnuliSpec, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("N must be at least 1".into()));
        }
        if degree == 0 || k <= 2 * degree as usize {
            return Err(Error::Unsupported { k, degree });
        }
        let p = annuli.params();
        if p.degree != degree {
            return Err(Error::InvalidParameters(format!(
                "annuli built for degree {} but construction degree is {degree}",
                p.degree
            )));
        }
        // several shells must fit inside the box's range of squared norms
        if p.inner_set.len() >= 2 {
            let coupling = 2.0 * p.delta * p.n0 as f64;
            let limit = 4f64.powi(-(degree as i32));
            if coupling > limit * (1.0 + 1e-12) {
                return Err(Error::Coupling { coupling, limit });
            }
        }
        Ok(TorusConfig { n, k, degree, annuli, seed })
    }

    pub fn dim(&self) -> usize {
        self.annuli.params().dim
    }
}

/// The random rotation `n ↦ nθ + a mod 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusEmbedding {
    pub theta: TorusPoint,
    pub shift: TorusPoint,
}

impl TorusEmbedding {
    /// Draws `θ` and `a` uniformly from the torus (to 64-bit resolution).
    pub fn from_seed(dim: usize, seed: u64) -> Self {
        let mut rng = substream(seed, rng::stream::EMBEDDING);
        let mut draw = || TorusPoint::from_fixed((0..dim).map(|_| rng.next_u64() as i64).collect());
        let theta = draw();
        let shift = draw();
        TorusEmbedding { theta, shift }
    }

    /// `nθ + a mod 1`, exact.
    pub fn image(&self, n: u64) -> TorusPoint {
        let coords = self
            .theta
            .fixed()
            .iter()
            .zip(self.shift.fixed())
            .map(|(&t, &a)| t.wrapping_mul(n as i64).wrapping_add(a))
            .collect();
        TorusPoint::from_fixed(coords)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusDetails {
    pub config: TorusConfig,
    pub embedding: TorusEmbedding,
    /// Whether the shell index set was checked free of k-term `2D`-progressions
    /// (false: trusted because detection was over budget).
    pub inner_verified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Details {
    Torus(Box<TorusDetails>),
    Behrend(BehrendDetails),
    Rankin(Box<RankinDetails>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionResult {
    pub set: IntSet,
    /// Size before the removal step.
    pub candidate_size: usize,
    /// One entry per progression type found: the type and the element removed.
    pub removed: Vec<(ProgressionType, u64)>,
    /// The exact detector found no progression in `set`.
    pub certified: bool,
    pub details: Details,
}

impl ConstructionResult {
    pub fn density(&self) -> f64 {
        self.set.density()
    }
}

/// Whether `inner` is free of k-term `2D`-progressions. `None` when the
/// check is over budget.
fn check_inner(inner: &IntSet, k: usize, degree: u32, policy: &VerifyPolicy) -> Option<bool> {
    let twice = 2 * degree;
    if k <= twice as usize + 1 {
        // any two distinct values already give a nonconstant progression
        return Some(inner.len() <= 1);
    }
    policy
        .allows(inner.len(), k, twice)
        .then(|| !has_progression(inner, k, twice))
}

/// Integers `n ∈ [N]` whose torus image lies in the annuli.
pub(crate) fn torus_candidates(cfg: &TorusConfig, embedding: &TorusEmbedding) -> IntSet {
    const CHUNK: u64 = 1 << 14;
    let members: Vec<u64> = (0..cfg.n.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK + 1;
            let hi = (lo + CHUNK - 1).min(cfg.n);
            (lo..=hi).filter(|&n| annuli_contains(&cfg.annuli, &embedding.image(n)))
        })
        .collect();
    IntSet::new(cfg.n, members).expect("candidates are increasing and inside [N]")
}

/// Removes the start of every progression type in `candidates` and checks
/// that nothing survives. Returns `(set, removed)`.
pub(crate) fn remove_progressions(
    candidates: &IntSet,
    k: usize,
    degree: u32,
) -> Result<(IntSet, Vec<(ProgressionType, u64)>)> {
    let witnesses = find_progressions(candidates, k, degree, None)?;
    let n = candidates.universe() as f64;
    if witnesses.len() as f64 >= 2f64.powi(degree as i32 + 1) * n * n {
        return Err(Error::Internal(format!(
            "{} progression types in [{}] exceed the type-count bound",
            witnesses.len(),
            candidates.universe()
        )));
    }
    let removed: Vec<(ProgressionType, u64)> = witnesses
        .iter()
        .map(|w| (w.kind, w.kind.start as u64))
        .collect();
    let starts: Vec<u64> = removed.iter().map(|&(_, s)| s).collect();
    let set = candidates.without(&starts);
    if has_progression(&set, k, degree) {
        return Err(Error::Internal("progression survived the removal step".into()));
    }
    Ok((set, removed))
}

/// Random torus construction followed by the removal step.
///
/// Draws `θ, a` from the seed, keeps `n ∈ [N]` with `nθ + a mod 1` in the
/// annuli, and, if the detector is within `policy`, removes the start of every
/// k-term D-progression type and certifies the result.
pub fn build_torus_set(cfg: &TorusConfig, policy: &VerifyPolicy) -> Result<ConstructionResult> {
    let params = cfg.annuli.params();
    let inner_verified = match check_inner(&params.inner_set, cfg.k, cfg.degree, policy) {
        Some(true) => true,
        Some(false) => {
            return Err(Error::InvalidParameters(format!(
                "shell index set contains a {}-term {}-progression",
                cfg.k,
                2 * cfg.degree
            )))
        }
        None => false,
    };

    let embedding = TorusEmbedding::from_seed(cfg.dim(), cfg.seed);
    let candidates = torus_candidates(cfg, &embedding);
    let candidate_size = candidates.len();

    let (set, removed, certified) = if policy.allows(candidate_size, cfg.k, cfg.degree) {
        let (set, removed) = remove_progressions(&candidates, cfg.k, cfg.degree)?;
        (set, removed, true)
    } else {
        (candidates, Vec::new(), false)
    };

    Ok(ConstructionResult {
        set,
        candidate_size,
        removed,
        certified,
        details: Details::Torus(Box::new(TorusDetails {
            config: cfg.clone(),
            embedding,
            inner_verified,
        })),
    })
}
