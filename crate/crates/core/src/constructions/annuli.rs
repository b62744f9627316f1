use num_bigint::BigInt;
use num_traits::One;

use super::params::mu_sigma;
use crate::bounds::sample_statistics;
use crate::rng;
use crate::{Error, IntSet, Rational, Result};

/// Membership intervals are shrunk by this much at both ends, so float
/// error in the squared norm can only drop points, never admit them.
pub const GUARD_BAND: f64 = 1e-12;

/// Number of candidate shifts tried by [`choose_z`]: `z ∈ {−1, −0.99, …, 1}`.
pub const Z_GRID: usize = 201;

const FIXED_ONE: f64 = 18_446_744_073_709_551_616.0; // 2^64

/// A point of the torus `R^d / Z^d`, stored in fixed point: coordinate `c`
/// represents `c / 2^64`, which always lies in `[−1/2, 1/2)`.
///
/// Multiples and sums are computed with wrapping integer arithmetic, which is
/// exact reduction mod 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<i64>,
}

impl TorusPoint {
    pub fn from_fixed(coords: Vec<i64>) -> Self {
        TorusPoint { coords }
    }

    /// Reduces each real coordinate mod 1 into `[−1/2, 1/2)`, rounding to
    /// the nearest multiple of `2^−64`.
    pub fn from_f64(coords: &[f64]) -> Self {
        let coords = coords
            .iter()
            .map(|&x| {
                let y = x - (x + 0.5).floor();
                (y * FIXED_ONE) as i64
            })
            .collect();
        TorusPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn fixed(&self) -> &[i64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i] as f64 / FIXED_ONE
    }

    /// Exact coordinates.
    pub fn to_rationals(&self) -> Vec<Rational> {
        let denom: BigInt = BigInt::one() << 64;
        self.coords
            .iter()
            .map(|&c| Rational::new(BigInt::from(c), denom.clone()))
            .collect()
    }

    /// Every coordinate strictly inside `(−2^{−D−1}, 2^{−D−1})`.
    pub fn in_box(&self, degree: u32) -> bool {
        if degree == 0 {
            return true;
        }
        let limit: i128 = 1i128 << 63u32.saturating_sub(degree);
        let limit = if degree >= 63 { 1 } else { limit };
        self.coords.iter().all(|&c| i128::from(c).abs() < limit)
    }

    pub fn squared_norm(&self) -> f64 {
        (0..self.dim()).map(|i| self.coord(i).powi(2)).sum()
    }
}

/// Shells of [`AnnuliSpec`] without the shift `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnuliParams {
    pub inner_set: IntSet,
    pub n0: u64,
    pub degree: u32,
    pub delta: f64,
    pub dim: usize,
    /// `μ_D` as a float.
    pub mu: f64,
    /// `σ_D`.
    pub sigma: f64,
}

impl AnnuliParams {
    /// Requires `inner_set ⊆ [n0]`, `δ > 0` and `2δ ≤ 1/N₀` so the shells
    /// are disjoint.
    pub fn new(inner_set: IntSet, n0: u64, degree: u32, delta: f64, dim: usize) -> Result<Self> {
        if dim == 0 || degree == 0 {
            return Err(Error::InvalidParameters("dimension and degree must be at least 1".into()));
        }
        if n0 == 0 || inner_set.universe() != n0 {
            return Err(Error::InvalidParameters(format!(
                "inner set must live in [N0] with N0 = {n0} ≥ 1"
            )));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameters(format!("δ must be positive, got {delta}")));
        }
        if 2.0 * delta * n0 as f64 > 1.0 {
            return Err(Error::InvalidParameters(format!(
                "shells overlap: 2·δ·N0 = {} > 1",
                2.0 * delta * n0 as f64
            )));
        }
        let ms = mu_sigma(degree, dim);
        Ok(AnnuliParams {
            inner_set,
            n0,
            degree,
            delta,
            dim,
            mu: ms.mean_f64(),
            sigma: ms.sigma,
        })
    }

    /// Single shell: `A₀ = {1}`, `N₀ = 1`.
    pub fn single_shell(degree: u32, delta: f64, dim: usize) -> Result<Self> {
        Self::new(IntSet::new(1, vec![1])?, 1, degree, delta, dim)
    }

    pub fn with_z(self, z: f64) -> Result<AnnuliSpec> {
        AnnuliSpec::new(self, z)
    }

    /// Number of samples with statistic in the guarded union, given sorted
    /// statistics.
    fn count_sorted(&self, sorted: &[f64], z: f64) -> usize {
        let half = self.delta - GUARD_BAND;
        if half <= 0.0 {
            return 0;
        }
        self.inner_set
            .members()
            .iter()
            .map(|&a| {
                let center = z - (a - 1) as f64 / self.n0 as f64;
                let lo = sorted.partition_point(|&s| s <= center - half);
                let hi = sorted.partition_point(|&s| s < center + half);
                hi.saturating_sub(lo)
            })
            .sum()
    }
}

/// Union of `|A₀|` shells intersected with `Box_D`:
/// `{x ∈ Box_D : (‖x‖² − μ_D)/σ_D ∈ ⋃_{a∈A₀} (z − (a−1)/N₀ ± δ)}`.
///
/// `z` is in units of `σ_D` and lies in `[−1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnuliSpec {
    params: AnnuliParams,
    z: f64,
}

impl AnnuliSpec {
    pub fn new(params: AnnuliParams, z: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&z) {
            return Err(Error::InvalidParameters(format!("z = {z} must lie in [−1, 1]")));
        }
        Ok(AnnuliSpec { params, z })
    }

    pub fn params(&self) -> &AnnuliParams {
        &self.params
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn statistic(&self, squared_norm: f64) -> f64 {
        (squared_norm - self.params.mu) / self.params.sigma
    }

    /// Whether a normalized statistic falls in the guarded union.
    pub fn contains_statistic(&self, s: f64) -> bool {
        let p = &self.params;
        let n0 = p.n0 as f64;
        // shells are disjoint, so only the nearest index can match
        let a = ((self.z - s) * n0).round() + 1.0;
        if !(a >= 1.0 && a <= n0) || !p.inner_set.contains(a as u64) {
            return false;
        }
        let center = self.z - (a - 1.0) / n0;
        (s - center).abs() < p.delta - GUARD_BAND
    }
}

/// Membership of a torus point in the annuli.
pub fn annuli_contains(spec: &AnnuliSpec, x: &TorusPoint) -> bool {
    if x.dim() != spec.params.dim || !x.in_box(spec.params.degree) {
        return false;
    }
    spec.contains_statistic(spec.statistic(x.squared_norm()))
}

/// Picks the shift `z` on a 201-point grid over `[−1, 1]` that maximizes the
/// Monte Carlo volume of the annuli. All candidates are scored on the same
/// `samples` points; ties go to the candidate nearest `z = 0`.
pub fn choose_z(params: &AnnuliParams, samples: usize, seed: u64) -> Result<f64> {
    if samples < crate::bounds::MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "choose_z needs at least {} samples, got {samples}",
            crate::bounds::MIN_SAMPLES
        )));
    }
    let mut stats = sample_statistics(params, samples, seed, rng::stream::CHOOSE_Z);
    stats.sort_by(f64::total_cmp);
    let mid = Z_GRID / 2;
    let best = (0..Z_GRID)
        .map(|i| (params.count_sorted(&stats, grid_value(i)), i))
        .max_by(|(ca, ia), (cb, ib)| {
            ca.cmp(cb)
                .then_with(|| ib.abs_diff(mid).cmp(&ia.abs_diff(mid)))
                .then_with(|| ib.cmp(ia))
        })
        .map(|(_, i)| i)
        .unwrap_or(mid);
    Ok(grid_value(best))
}

fn grid_value(i: usize) -> f64 {
    (i as f64 - (Z_GRID / 2) as f64) / (Z_GRID / 2) as f64
}
