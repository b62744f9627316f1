//! Independent reference implementations used by the integration suites.
//!
//! Nothing here calls into the library's detector or solver: progressions
//! are found by brute force over all k-tuples of values, and extremal sizes
//! by dynamic programming over every subset of `[N]`.

#![allow(dead_code)]

/// `Δ^order` of an integer sequence, by repeated differencing.
pub fn diff(terms: &[i128], order: usize) -> Vec<i128> {
    let mut v = terms.to_vec();
    for _ in 0..order {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v
}

/// Whether `terms` is a nonconstant progression of degree ≤ `degree`.
pub fn is_progression(terms: &[i128], degree: u32) -> bool {
    let nonconstant = terms.windows(2).any(|w| w[0] != w[1]);
    let order = degree as usize + 1;
    nonconstant && (terms.len() <= order || diff(terms, order).iter().all(|&x| x == 0))
}

/// Calls `f` on every k-tuple of `values` (odometer order).
pub fn for_each_tuple(values: &[i128], k: usize, mut f: impl FnMut(&[i128])) {
    if values.is_empty() {
        return;
    }
    let mut idx = vec![0usize; k];
    let mut tuple: Vec<i128> = vec![values[0]; k];
    loop {
        f(&tuple);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                tuple[pos] = values[idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = values[0];
        }
    }
}

/// Brute-force witness search over all k-tuples of members.
pub fn naive_has_progression(members: &[u64], k: usize, degree: u32) -> bool {
    let values: Vec<i128> = members.iter().map(|&m| m as i128).collect();
    let mut found = false;
    for_each_tuple(&values, k, |t| {
        if !found && is_progression(t, degree) {
            found = true;
        }
    });
    found
}

/// Value sets (bit `v − 1` for value `v`) of all k-term progressions in `[n]`,
/// grouped by their largest value.
pub fn naive_patterns(n: u64, k: usize, degree: u32) -> Vec<Vec<u64>> {
    assert!(n <= 64);
    let values: Vec<i128> = (1..=n as i128).collect();
    let mut by_top = vec![Vec::new(); n as usize + 1];
    let mut seen = std::collections::HashSet::new();
    for_each_tuple(&values, k, |t| {
        if is_progression(t, degree) {
            let mask = t.iter().fold(0u64, |m, &v| m | 1 << (v - 1));
            if seen.insert(mask) {
                by_top[64 - mask.leading_zeros() as usize].push(mask);
            }
        }
    });
    by_top
}

/// `r_{k,D}(1..=n_max)` by checking every subset of `[n_max]`.
pub fn naive_r_table(n_max: u64, k: usize, degree: u32) -> Vec<usize> {
    assert!(n_max <= 24);
    let by_top = naive_patterns(n_max, k, degree);
    let size = 1usize << n_max;
    let mut free = vec![false; size];
    free[0] = true;
    let mut best_with_top = vec![0usize; n_max as usize + 1];
    for m in 1..size {
        let top = usize::BITS as usize - m.leading_zeros() as usize;
        let rest = m & !(1 << (top - 1));
        let mask = m as u64;
        free[m] = free[rest] && by_top[top].iter().all(|&p| p & !mask != 0);
        if free[m] {
            let c = m.count_ones() as usize;
            best_with_top[top] = best_with_top[top].max(c);
        }
    }
    let mut out = Vec::with_capacity(n_max as usize);
    let mut best = 0;
    for top in 1..=n_max as usize {
        best = best.max(best_with_top[top]);
        out.push(best);
    }
    out
}

/// Number of distinct types `(n, a, b)` realized by k-term progressions of
/// degree ≤ `degree` in `[n]`: `n` is the least order with constant nonzero
/// differences, `a` the first term, `b` that constant.
pub fn naive_count_types(n: u64, k: usize, degree: u32) -> usize {
    let values: Vec<i128> = (1..=n as i128).collect();
    let mut types = std::collections::HashSet::new();
    for_each_tuple(&values, k, |t| {
        if is_progression(t, degree) {
            let order = (1..k)
                .find(|&o| {
                    let d = diff(t, o);
                    d.iter().all(|&x| x == d[0]) && d[0] != 0
                })
                .expect("degree ≤ D sequences have a constant difference");
            types.insert((order, t[0], diff(t, order)[0]));
        }
    });
    types.len()
}

/// Small deterministic generator for test inputs (splitmix64).
pub struct Mix(pub u64);

impl Mix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}
