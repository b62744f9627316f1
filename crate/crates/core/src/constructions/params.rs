//! Parameter schedule of the torus construction.
//!
//! Everything takes `log2_n = log₂ N` so that `N` may be astronomically
//! large; integer `N` is converted with `(N as f64).log2()`.

use std::f64::consts::{E, LN_2, PI};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use statrs::function::gamma::ln_gamma;

use crate::bounds::central_binomial;
use crate::{Error, Rational, Result};

/// Mean and spread of `‖x‖²` for `x` uniform in `Box_D ⊂ R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuSigma {
    /// `μ_D = 2^{−2D}·d/12`, exact.
    pub mean: Rational,
    /// `σ_D² = 2^{−4D}·d/180`, exact.
    pub variance: Rational,
    /// `√σ_D²` as a float.
    pub sigma: f64,
}

impl MuSigma {
    pub fn mean_f64(&self) -> f64 {
        self.mean.to_f64().expect("finite mean")
    }
}

pub fn mu_sigma(degree: u32, dim: usize) -> MuSigma {
    let d = BigInt::from(dim);
    let mean = Rational::new(d.clone(), BigInt::from(12) << (2 * degree));
    let variance = Rational::new(d, BigInt::from(180) << (4 * degree));
    let sigma = variance.to_f64().expect("finite variance").sqrt();
    MuSigma { mean, variance, sigma }
}

/// `F = 4^D / C(2D, D)`.
pub fn f_constant(degree: u32) -> f64 {
    4f64.powi(degree as i32) / central_binomial(degree)
}

fn check(log2_n: f64, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if !(log2_n > 0.0) || !log2_n.is_finite() {
        return Err(Error::InvalidArgument(format!("need N > 1, got log2 N = {log2_n}")));
    }
    Ok(())
}

/// Shell half-width
/// `δ = (1/(πF))·(d/((d+2)·2^{D+1}))^{2/d}·Γ(d/2)^{2/d} / (N^{2/d}·σ_D)`,
/// the value for which `1 − 2^{D+1}·N·vol ball(√(F σ_D δ)) = d/(d+2)`.
///
/// Asymptotically `δ ~ (3√5/(eπ))·C(2D,D)·√d / N^{2/d}`.
pub fn delta_formula(log2_n: f64, degree: u32, dim: usize) -> Result<f64> {
    check(log2_n, dim)?;
    let d = dim as f64;
    let sigma = mu_sigma(degree, dim).sigma;
    let ln_delta = -(PI * f_constant(degree)).ln()
        + (2.0 / d)
            * ((d / (d + 2.0)).ln() - f64::from(degree + 1) * LN_2 + ln_gamma(d / 2.0)
                - log2_n * LN_2)
        - sigma.ln();
    Ok(ln_delta.exp())
}

/// `(3√5/(eπ))·C(2D,D)·√d / N^{2/d}`, the large-`d` form of [`delta_formula`].
pub fn delta_asymptotic(log2_n: f64, degree: u32, dim: usize) -> f64 {
    let d = dim as f64;
    3.0 * 5f64.sqrt() / (E * PI) * central_binomial(degree) * d.sqrt()
        * (-2.0 * log2_n / d).exp2()
}

/// Inner universe size `N₀ = (eπ/(3√5))·(4^D·C(2D,D))^{−1}·N^{2/d}/√d`,
/// before flooring.
pub fn n0_formula(log2_n: f64, degree: u32, dim: usize) -> Result<f64> {
    check(log2_n, dim)?;
    let d = dim as f64;
    let log2_value = (E * PI / (3.0 * 5f64.sqrt())).log2()
        - 2.0 * f64::from(degree)
        - central_binomial(degree).log2()
        + 2.0 * log2_n / d
        - 0.5 * d.log2();
    Ok(log2_value.exp2())
}

/// `⌊x⌋`, tolerating values a few ulps below an integer.
fn floor_tolerant(x: f64) -> f64 {
    (x + 1e-9 * x.abs().max(1.0)).floor()
}

/// Base-case dimension `max(1, ⌊√(2 log N / D)⌋)`.
pub fn base_case_dim(log2_n: f64, degree: u32) -> Result<usize> {
    if !(log2_n >= 1.0) || degree == 0 {
        return Err(Error::InvalidArgument(format!(
            "need N ≥ 2 and D ≥ 1, got log2 N = {log2_n}, D = {degree}"
        )));
    }
    let d = floor_tolerant((2.0 * log2_n / f64::from(degree)).sqrt());
    Ok((d as usize).max(1))
}

/// Inductive dimension `max(1, ⌊2^{n/2}·(log N / D)^{1/(n+1)}⌋)`.
pub fn inductive_dim(log2_n: f64, degree: u32, n: u32) -> Result<usize> {
    if !(log2_n >= 1.0) || degree == 0 || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need N ≥ 2, D ≥ 1, n ≥ 2, got log2 N = {log2_n}, D = {degree}, n = {n}"
        )));
    }
    let nf = f64::from(n);
    let d = floor_tolerant((nf / 2.0).exp2() * (log2_n / f64::from(degree)).powf(1.0 / (nf + 1.0)));
    Ok((d as usize).max(1))
}
