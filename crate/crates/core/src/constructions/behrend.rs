use super::torus::{ConstructionResult, Details, VerifyPolicy};
use crate::progressions::has_progression;
use crate::{Error, IntSet, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehrendDetails {
    pub dim: u32,
    pub p: u64,
    pub radius_sq: u64,
    /// Number of radius² values a point of `{1..P−1}^d` can take,
    /// `d(P−1)² − d + 1`.
    pub radius_candidates: u64,
}

/// `φ(x) = Σ x_i (2P)^(i−1)`.
pub fn behrend_map(point: &[u64], p: u64) -> u64 {
    point.iter().rev().fold(0, |acc, &x| acc * 2 * p + x)
}

/// Largest image of the digit map on `{1..P−1}^d`,
/// `(P−1)((2P)^d − 1)/(2P − 1)`, or `None` on overflow.
pub fn behrend_image_max(dim: u32, p: u64) -> Option<u64> {
    let radix = 2u64.checked_mul(p)?;
    let mut total: u64 = 0;
    for _ in 0..dim {
        total = total.checked_mul(radix)?.checked_add(p.checked_sub(1)?)?;
    }
    Some(total)
}

/// `counts[r]` = number of points of `{1..P−1}^d` with squared norm `r`.
pub fn shell_counts(dim: u32, p: u64) -> Vec<u64> {
    let top = (p - 1) as usize;
    let mut counts = vec![1u64];
    for _ in 0..dim {
        let mut next = vec![0u64; counts.len() + top * top];
        for (r, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for x in 1..=top {
                next[r + x * x] += c;
            }
        }
        counts = next;
    }
    counts
}

/// Radius² with the most lattice points; ties go to the smaller radius.
fn best_radius(counts: &[u64]) -> (u64, u64) {
    let (r, &c) = counts
        .iter()
        .enumerate()
        .max_by(|(ra, ca), (rb, cb)| ca.cmp(cb).then(rb.cmp(ra)))
        .expect("shell counts are never empty");
    (r as u64, c)
}

/// `(d, P)` with image inside `[N]` that maximizes the largest shell.
pub fn choose_behrend_params(n: u64) -> Option<(u32, u64)> {
    let mut best: Option<(u64, u32, u64)> = None;
    for dim in 1.. {
        if behrend_image_max(dim, 2).is_none_or(|m| m > n) {
            break;
        }
        // largest P for this d; shells only grow with P
        let (mut lo, mut hi) = (2u64, n.saturating_add(2));
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if behrend_image_max(dim, mid).is_some_and(|m| m <= n) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let size = if dim == 1 { 1 } else { best_radius(&shell_counts(dim, lo)).1 };
        if best.is_none_or(|(s, _, _)| size > s) {
            best = Some((size, dim, lo));
        }
    }
    best.map(|(_, d, p)| (d, p))
}

fn points_on_shell(dim: usize, p: u64, radius_sq: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, dim: usize, p: u64, left: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == dim {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest = (dim - prefix.len() - 1) as u64;
        for x in 1..p {
            let sq = x * x;
            if sq + rest > left {
                break;
            }
            if left - sq > rest * (p - 1) * (p - 1) {
                continue;
            }
            prefix.push(x);
            go(prefix, dim, p, left - sq, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(dim), dim, p, radius_sq, &mut out);
    out
}

/// Behrend's sphere construction: points of `{1..P−1}^d` on one sphere,
/// read as base-`2P` numbers. Free of 3-term arithmetic progressions, hence
/// of k-term ones for every `k ≥ 3`; the exact detector certifies this when
/// `policy` allows.
pub fn build_behrend_set(
    n: u64,
    dim: u32,
    p: u64,
    radius_sq: Option<u64>,
    policy: &VerifyPolicy,
) -> Result<ConstructionResult> {
    if dim == 0 || p < 2 {
        return Err(Error::InvalidParameters(format!(
            "Behrend needs d ≥ 1 and P ≥ 2, got d = {dim}, P = {p}"
        )));
    }
    match behrend_image_max(dim, p) {
        Some(m) if m <= n => {}
        max => {
            return Err(Error::InvalidParameters(format!(
                "digit map image reaches {} > N = {n}",
                max.map_or("overflow".to_string(), |m| m.to_string())
            )))
        }
    }
    let radius_sq = match radius_sq {
        Some(r) => r,
        None => best_radius(&shell_counts(dim, p)).0,
    };
    let set = IntSet::from_unsorted(
        n,
        points_on_shell(dim as usize, p, radius_sq)
            .iter()
            .map(|x| behrend_map(x, p))
            .collect(),
    )?;
    let candidate_size = set.len();
    let certified = policy.allows(set.len(), 3, 1);
    if certified && has_progression(&set, 3, 1) {
        return Err(Error::Internal("Behrend set contains a 3-term progression".into()));
    }
    let d = u64::from(dim);
    Ok(ConstructionResult {
        set,
        candidate_size,
        removed: Vec::new(),
        certified,
        details: Details::Behrend(BehrendDetails {
            dim,
            p,
            radius_sq,
            radius_candidates: d * (p - 1) * (p - 1) - d + 1,
        }),
    })
}
