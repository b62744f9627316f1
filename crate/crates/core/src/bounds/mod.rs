//! Closed-form density bounds, the lead-coefficient bound for polynomials
//! that stay near a sphere, ball volumes, and Monte Carlo annuli volumes.
//!
//! Densities are carried as base-2 logarithms so `N` as large as `10^300`
//! (or far beyond, via `log2_n`) never overflows.

mod volume;

use std::f64::consts::{E, PI};

use num_bigint::BigInt;
use num_traits::One;

pub use volume::{ball_volume, ln_ball_volume, mc_annuli_volume, VolumeEstimate};
pub(crate) use volume::{sample_statistics, MIN_SAMPLES};

use crate::{Error, Rational, Result};

/// `(2D)!` as a float.
fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `C(2D, D)` as a float.
pub fn central_binomial(degree: u32) -> f64 {
    (1..=degree).fold(1.0, |acc, i| acc * f64::from(degree + i) / f64::from(i))
}

/// Largest possible norm of the lead coefficient of a degree-`D` vector
/// polynomial whose squared norm stays within `δ` of a constant at `2D + 1`
/// consecutive integers: `2^D · √(δ / (2D)!)`.
pub fn lemma1_bound(degree: u32, delta: f64) -> Result<f64> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("δ must be nonnegative, got {delta}")));
    }
    Ok(2f64.powi(degree as i32) * (delta / factorial(2 * degree)).sqrt())
}

/// Square of [`lemma1_bound`], exactly: `4^D · δ / (2D)!`.
pub fn lemma1_bound_squared(degree: u32, delta: &Rational) -> Rational {
    let fact: BigInt = (1..=2 * degree).map(BigInt::from).product();
    delta * Rational::new(BigInt::one() << (2 * degree), fact)
}

/// `√360 / (e·π^{3/2})`, the explicit constant of the three-term bound.
pub fn r3_constant() -> f64 {
    360f64.sqrt() / (E * PI.powf(1.5))
}

/// `(√90 / (e·π^{3/2}))·(2^D / D^{1/4})·C(2D, D)`, the base-case constant.
pub fn base_case_constant(degree: u32) -> f64 {
    90f64.sqrt() / (E * PI.powf(1.5)) * 2f64.powi(degree as i32) / f64::from(degree).powf(0.25)
        * central_binomial(degree)
}

/// `E|X² − 2^{−2D}/12|³` for `X` uniform on `(−2^{−D−1}, 2^{−D−1})`,
/// i.e. `2^{−6D}(3 + 2√3)/11340`.
///
/// This is the third absolute moment behind the quantitative central limit
/// step for the squared norm; nothing in the crate consumes it.
pub fn berry_esseen_rho(degree: u32) -> f64 {
    2f64.powi(-6 * degree as i32) * (3.0 + 2.0 * 3f64.sqrt()) / 11340.0
}

/// Smallest `n` with `D·2^n ≥ k`, i.e. `⌈log₂(k/D)⌉` (0 when `k ≤ D`).
pub fn ceil_log2_ratio(k: usize, degree: u32) -> u32 {
    let mut n = 0;
    while (degree as u128) << n < k as u128 {
        n += 1;
    }
    n
}

/// Whether a bound carries an unspecified multiplicative constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Constant {
    /// The density is stated up to an unknown factor `C`; reported with `C = 1`.
    Symbolic,
    Explicit(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityBound {
    pub log2_density: f64,
    pub constant: Constant,
}

impl DensityBound {
    /// `2^log2_density`; may underflow to 0 for astronomically large `N`.
    pub fn density(&self) -> f64 {
        self.log2_density.exp2()
    }
}

/// Evaluated lower bounds for one `(N, k, D)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub log2_n: f64,
    pub k: usize,
    pub degree: u32,
    /// `⌈log₂(k/D)⌉`.
    pub n: u32,
    /// `n·2^{(n−1)/2}·D^{(n−1)/n}`, the coefficient of `(log N)^{1/n}` in
    /// the exponent of the general bound.
    pub exponent_coefficient: f64,
    /// `⌈log₂ k⌉`.
    pub corollary_n: u32,
    /// General bound on `r_k(N)/N`, `×C`.
    pub corollary: DensityBound,
    /// General bound on `r_{k,D}(N)/N`, `×C`.
    pub theorem: Option<DensityBound>,
    /// Explicit three-term bound (only for `k = 3`).
    pub r3: Option<DensityBound>,
    /// Explicit base-case bound on `r_{k,D}(N)/N` (requires `k > 2D`).
    pub base_case: Option<DensityBound>,
}

impl BoundReport {
    pub fn corollary_density(&self) -> f64 {
        self.corollary.density()
    }
}

fn check_log2_n(log2_n: f64) -> Result<()> {
    if !(log2_n >= 1.0) || !log2_n.is_finite() {
        return Err(Error::InvalidArgument(format!("need N ≥ 2, got log2 N = {log2_n}")));
    }
    Ok(())
}

/// `(1/(2n))·log log N − c·(log N)^{1/n}` with `c = n·2^{(n−1)/2}·D^{(n−1)/n}`.
fn general_log2_density(log2_n: f64, n: u32, degree: u32) -> (f64, f64) {
    let nf = f64::from(n);
    let coefficient =
        nf * 2f64.powf((nf - 1.0) / 2.0) * f64::from(degree).powf((nf - 1.0) / nf);
    let log2_density = log2_n.log2() / (2.0 * nf) - coefficient * log2_n.powf(1.0 / nf);
    (log2_density, coefficient)
}

fn r3_log2_density(log2_n: f64) -> f64 {
    r3_constant().log2() + 0.25 * (2.0 * log2_n).log2() - 2.0 * (2.0 * log2_n).sqrt()
}

fn base_log2_density(log2_n: f64, degree: u32) -> f64 {
    base_case_constant(degree).log2() + 0.25 * (2.0 * log2_n).log2()
        - (8.0 * f64::from(degree) * log2_n).sqrt()
}

fn corollary_part(log2_n: f64, k: usize) -> (u32, DensityBound, Option<DensityBound>) {
    let n = ceil_log2_ratio(k, 1);
    let (log2_density, _) = general_log2_density(log2_n, n, 1);
    let r3 = (k == 3).then(|| DensityBound {
        log2_density: r3_log2_density(log2_n),
        constant: Constant::Explicit(r3_constant()),
    });
    (n, DensityBound { log2_density, constant: Constant::Symbolic }, r3)
}

/// Bounds on `r_k(N)/N` (degree 1).
pub fn corollary_bound(log2_n: f64, k: usize) -> Result<BoundReport> {
    check_log2_n(log2_n)?;
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k must be at least 3, got {k}")));
    }
    let (n, corollary, r3) = corollary_part(log2_n, k);
    let (_, coefficient) = general_log2_density(log2_n, n, 1);
    Ok(BoundReport {
        log2_n,
        k,
        degree: 1,
        n,
        exponent_coefficient: coefficient,
        corollary_n: n,
        corollary,
        theorem: Some(corollary),
        r3,
        base_case: Some(DensityBound {
            log2_density: base_log2_density(log2_n, 1),
            constant: Constant::Explicit(base_case_constant(1)),
        }),
    })
}

/// Bounds on `r_{k,D}(N)/N`.
pub fn theorem_bound(log2_n: f64, k: usize, degree: u32) -> Result<BoundReport> {
    check_log2_n(log2_n)?;
    if degree == 0 || k <= 2 * degree as usize {
        return Err(Error::Unsupported { k, degree });
    }
    let n = ceil_log2_ratio(k, degree);
    let (log2_density, coefficient) = general_log2_density(log2_n, n, degree);
    let (corollary_n, corollary, r3) = corollary_part(log2_n, k);
    Ok(BoundReport {
        log2_n,
        k,
        degree,
        n,
        exponent_coefficient: coefficient,
        corollary_n,
        corollary,
        theorem: Some(DensityBound { log2_density, constant: Constant::Symbolic }),
        r3: if degree == 1 { r3 } else { None },
        base_case: Some(DensityBound {
            log2_density: base_log2_density(log2_n, degree),
            constant: Constant::Explicit(base_case_constant(degree)),
        }),
    })
}
