use rand::Rng;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::constructions::{AnnuliParams, AnnuliSpec};
use crate::rng::{self, substream};
use crate::{Error, Result};

/// `ln vol ball_d(x) = ln 2 + (d/2) ln π + d ln x − ln Γ(d/2) − ln d`.
pub fn ln_ball_volume(dim: u32, radius: f64) -> f64 {
    let d = f64::from(dim);
    std::f64::consts::LN_2 + 0.5 * d * std::f64::consts::PI.ln() + d * radius.ln()
        - ln_gamma(0.5 * d)
        - d.ln()
}

/// Volume of the `d`-dimensional ball of radius `x`, evaluated in log space.
pub fn ball_volume(dim: u32, radius: f64) -> Result<f64> {
    if dim == 0 || !(radius >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ball volume needs d ≥ 1 and x ≥ 0, got d = {dim}, x = {radius}"
        )));
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    Ok(ln_ball_volume(dim, radius).exp())
}

/// Monte Carlo estimate of `vol(Annuli) / vol(Box_D)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub relative_volume: f64,
    /// `√(p(1 − p)/samples)`.
    pub std_error: f64,
    pub samples: usize,
}

impl VolumeEstimate {
    fn from_count(hits: usize, samples: usize) -> Self {
        let p = hits as f64 / samples as f64;
        VolumeEstimate {
            relative_volume: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }
}

const BLOCK: usize = 4096;

/// Normalized squared norms `(‖x‖² − μ_D)/σ_D` of `samples` uniform points
/// of `Box_D`. Block `b` draws from ChaCha stream `(stream << 32) | b`, so the
/// output is independent of the worker count.
pub(crate) fn sample_statistics(
    params: &AnnuliParams,
    samples: usize,
    seed: u64,
    stream: u64,
) -> Vec<f64> {
    let half_side = 2f64.powi(-(params.degree as i32) - 1);
    let dim = params.dim;
    let (mu, sigma) = (params.mu, params.sigma);
    let blocks = samples.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = substream(seed, (stream << 32) | b as u64);
            let count = BLOCK.min(samples - b * BLOCK);
            (0..count)
                .map(|_| {
                    let mut sq = 0.0;
                    for _ in 0..dim {
                        let x = half_side * (2.0 * rng.random::<f64>() - 1.0);
                        sq += x * x;
                    }
                    (sq - mu) / sigma
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub(crate) const MIN_SAMPLES: usize = 10_000;

/// Fraction of uniform points of `Box_D` inside the annuli.
pub fn mc_annuli_volume(spec: &AnnuliSpec, samples: usize, seed: u64) -> Result<VolumeEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let stats = sample_statistics(spec.params(), samples, seed, rng::stream::VOLUME);
    let hits = stats.iter().filter(|&&s| spec.contains_statistic(s)).count();
    Ok(VolumeEstimate::from_count(hits, samples))
}
