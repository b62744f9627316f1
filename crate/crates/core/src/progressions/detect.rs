//! Exhaustive detection of k-term D-progressions inside a finite set.
//!
//! A degree-≤D progression is fixed by its first `D + 1` values, so the
//! scanner walks every ordered `(D+1)`-tuple of set members (repetition
//! allowed, since progressions may revisit a value), extends it with the
//! difference table and checks the remaining `k − D − 1` terms for
//! membership. Cost is `|A|^(D+1)·k` elementary steps in the worst case; most
//! tuples leave the set after one or two extrapolated terms.

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use rayon::prelude::*;

use super::{ProgressionType, Sequence};
use crate::intset::Bitmap;
use crate::{Error, IntSet, Result};

/// A progression found in a set, with its classified type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: ProgressionType,
    pub terms: Vec<i64>,
}

impl Witness {
    pub fn sequence(&self) -> Sequence {
        Sequence::from_ints(self.terms.iter().copied())
    }
}

/// Worst-case step count `len^(D+1)·k` for [`find_progressions`].
pub fn detection_cost(len: usize, k: usize, degree: u32) -> u128 {
    (len as u128)
        .saturating_pow(degree + 1)
        .saturating_mul(k as u128)
}

struct Scanner<'a> {
    values: Vec<i64>,
    member: Bitmap,
    k: usize,
    prefix_len: usize,
    _set: &'a IntSet,
}

impl<'a> Scanner<'a> {
    fn new(set: &'a IntSet, k: usize, degree: u32) -> Self {
        Scanner {
            values: set.members().iter().map(|&v| v as i64).collect(),
            member: Bitmap::new(set),
            k,
            prefix_len: k.min(degree as usize + 1),
            _set: set,
        }
    }

    /// Visits every nonconstant progression whose first term is `values[first]`.
    fn scan_from<F>(&self, first: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let m = self.prefix_len;
        let n = self.values.len();
        if m == 0 || n == 0 {
            return ControlFlow::Continue(());
        }
        let mut idx = vec![0usize; m];
        idx[0] = first;
        let mut terms = vec![0i64; self.k];
        let mut work = vec![0i128; m];
        let mut diag = vec![0i128; m];
        loop {
            for (t, &i) in terms.iter_mut().zip(&idx) {
                *t = self.values[i];
            }
            if !terms[..m].windows(2).all(|w| w[0] == w[1]) && self.extend(&mut terms, &mut work, &mut diag) {
                visit(&terms)?;
            }
            // odometer over positions 1..m
            let mut pos = m;
            loop {
                pos -= 1;
                if pos == 0 {
                    return ControlFlow::Continue(());
                }
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// Fills `terms[m..k]` by extrapolation; false once a term leaves the set.
    fn extend(&self, terms: &mut [i64], work: &mut [i128], diag: &mut [i128]) -> bool {
        let m = self.prefix_len;
        if self.k == m {
            return true;
        }
        for (w, &t) in work.iter_mut().zip(terms.iter()) {
            *w = i128::from(t);
        }
        // after pass i, work[i..] holds Δ^i and diag[i] its last term
        diag[0] = work[m - 1];
        for i in 1..m {
            for j in (i..m).rev() {
                work[j] -= work[j - 1];
            }
            diag[i] = work[m - 1];
        }
        for t in terms.iter_mut().take(self.k).skip(m) {
            for i in (0..m - 1).rev() {
                diag[i] += diag[i + 1];
            }
            if !self.member.contains(diag[0]) {
                return false;
            }
            *t = diag[0] as i64;
        }
        true
    }
}

/// Minimal `n` with constant nonzero `n`-th differences.
pub(crate) fn classify_ints(terms: &[i64]) -> Option<ProgressionType> {
    let mut cur: Vec<i128> = terms.iter().map(|&t| i128::from(t)).collect();
    if cur.windows(2).all(|w| w[0] == w[1]) {
        return None;
    }
    for n in 1..terms.len() {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
        if cur.windows(2).all(|w| w[0] == w[1]) && cur[0] != 0 {
            return Some(ProgressionType {
                degree: n as u32,
                start: terms[0],
                diff: i64::try_from(cur[0]).ok()?,
            });
        }
    }
    None
}

/// Calls `visit` on every nonconstant k-term progression of degree ≤ `degree`
/// inside `set`, in lexicographic order of the first `degree + 1` terms.
///
/// Unlike [`find_progressions`] this accepts `k ≤ degree + 1`, where every
/// nonconstant k-tuple of members qualifies.
pub(crate) fn for_each_progression<F>(set: &IntSet, k: usize, degree: u32, mut visit: F)
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    let scanner = Scanner::new(set, k, degree);
    for first in 0..scanner.values.len() {
        if scanner.scan_from(first, &mut visit).is_break() {
            return;
        }
    }
}

/// Whether `set` contains any k-term progression of degree ≤ `degree`.
pub(crate) fn has_progression(set: &IntSet, k: usize, degree: u32) -> bool {
    let mut found = false;
    for_each_progression(set, k, degree, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

fn keep_smallest(map: &mut BTreeMap<ProgressionType, Vec<i64>>, kind: ProgressionType, terms: &[i64]) {
    map.entry(kind)
        .and_modify(|w| {
            if terms < w.as_slice() {
                *w = terms.to_vec();
            }
        })
        .or_insert_with(|| terms.to_vec());
}

/// All types of k-term D-progressions contained in `set`, one witness each.
///
/// Witnesses are sorted by type, and each is the lexicographically smallest
/// sequence of its type, so the output does not depend on the worker count.
/// With `limit`, the scan stops once that many distinct types were seen.
pub fn find_progressions(
    set: &IntSet,
    k: usize,
    degree: u32,
    limit: Option<usize>,
) -> Result<Vec<Witness>> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if k <= degree as usize + 1 {
        return Err(Error::Degenerate { k, degree });
    }
    let scanner = Scanner::new(set, k, degree);
    let classify = |terms: &[i64]| {
        classify_ints(terms).expect("extrapolated integer progressions always classify")
    };

    let found = match limit {
        Some(limit) => {
            let mut map = BTreeMap::new();
            if limit > 0 {
                for first in 0..scanner.values.len() {
                    let flow = scanner.scan_from(first, &mut |terms: &[i64]| {
                        let kind = classify(terms);
                        map.entry(kind).or_insert_with(|| terms.to_vec());
                        if map.len() >= limit {
                            ControlFlow::Break(())
                        } else {
                            ControlFlow::Continue(())
                        }
                    });
                    if flow.is_break() {
                        break;
                    }
                }
            }
            map
        }
        None => (0..scanner.values.len())
            .into_par_iter()
            .fold(BTreeMap::new, |mut map, first| {
                let _ = scanner.scan_from(first, &mut |terms: &[i64]| {
                    keep_smallest(&mut map, classify(terms), terms);
                    ControlFlow::Continue(())
                });
                map
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (kind, terms) in b {
                    keep_smallest(&mut a, kind, &terms);
                }
                a
            }),
    };

    Ok(found
        .into_iter()
        .map(|(kind, terms)| Witness { kind, terms })
        .collect())
}

/// Number of distinct types `(D', a, b)`, `1 ≤ D' ≤ degree`, realized by some
/// k-term progression inside `[n]`. Always below `2^(D+1)·n²`.
pub fn count_types(n: u64, k: usize, degree: u32) -> Result<u64> {
    if degree == 0 || k < degree as usize {
        return Err(Error::InvalidArgument(format!(
            "count_types needs k ≥ D ≥ 1, got k = {k}, D = {degree}"
        )));
    }
    let universe = IntSet::interval(n)?;
    let scanner = Scanner::new(&universe, k, degree);
    let types = (0..scanner.values.len())
        .into_par_iter()
        .fold(HashSet::new, |mut seen, first| {
            let _ = scanner.scan_from(first, &mut |terms: &[i64]| {
                if let Some(kind) = classify_ints(terms) {
                    seen.insert(kind);
                }
                ControlFlow::Continue(())
            });
            seen
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(types.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(universe: u64, members: &[u64]) -> IntSet {
        IntSet::from_unsorted(universe, members.to_vec()).unwrap()
    }

    #[test]
    fn ap_free_set_has_no_witnesses() {
        let a = set(10, &[1, 2, 4, 5, 10]);
        assert!(find_progressions(&a, 3, 1, None).unwrap().is_empty());
    }

    #[test]
    fn full_interval_reports_both_orientations() {
        let a = set(3, &[1, 2, 3]);
        let w = find_progressions(&a, 3, 1, None).unwrap();
        let kinds: Vec<_> = w.iter().map(|w| (w.kind, w.terms.clone())).collect();
        assert!(kinds.contains(&(ProgressionType { degree: 1, start: 1, diff: 1 }, vec![1, 2, 3])));
        assert!(kinds.contains(&(ProgressionType { degree: 1, start: 3, diff: -1 }, vec![3, 2, 1])));
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn repeated_values_are_detected() {
        let a = set(10, &[1, 2, 5, 10]);
        let w = find_progressions(&a, 5, 2, None).unwrap();
        assert!(w.iter().any(|w| w.terms == vec![2, 1, 2, 5, 10]
            && w.kind == ProgressionType { degree: 2, start: 2, diff: 2 }));
    }

    #[test]
    fn degenerate_parameters_rejected() {
        let a = set(5, &[1, 2]);
        assert!(matches!(find_progressions(&a, 3, 2, None), Err(Error::Degenerate { .. })));
        assert!(matches!(find_progressions(&a, 2, 1, None), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn limit_stops_early_and_is_deterministic() {
        let a = IntSet::interval(12).unwrap();
        let all = find_progressions(&a, 3, 1, None).unwrap();
        let some = find_progressions(&a, 3, 1, Some(3)).unwrap();
        assert_eq!(some.len(), 3);
        for w in &some {
            assert!(all.contains(w));
        }
        assert_eq!(some, find_progressions(&a, 3, 1, Some(3)).unwrap());
        assert!(find_progressions(&a, 3, 1, Some(0)).unwrap().is_empty());
    }

    #[test]
    fn first_witness_of_full_interval() {
        let a = set(3, &[1, 2, 3]);
        let w = find_progressions(&a, 3, 1, Some(1)).unwrap();
        assert_eq!(w[0].terms, vec![1, 2, 3]);
    }

    #[test]
    fn count_types_small_cases() {
        assert_eq!(count_types(5, 3, 1).unwrap(), 8);
        assert_eq!(count_types(1, 3, 1).unwrap(), 0);
        assert!(count_types(5, 1, 2).is_err());
    }

    #[test]
    fn extension_matches_rational_extrapolation() {
        let a = IntSet::interval(40).unwrap();
        for degree in 1..=3u32 {
            let k = degree as usize + 3;
            for_each_progression(&a, k, degree, |terms| {
                let prefix = Sequence::from_ints(terms[..degree as usize + 1].iter().copied());
                let full = super::super::extrapolate(&prefix, degree, k).unwrap();
                assert_eq!(full, Sequence::from_ints(terms.iter().copied()));
                ControlFlow::Continue(())
            });
        }
    }

    #[test]
    fn classify_ints_matches_rational_classify() {
        use super::super::{classify, Classification};
        for terms in [vec![2i64, 1, 2, 5, 10], vec![1, 2, 4, 7, 11], vec![9, 7, 5], vec![1, 8, 27, 64]] {
            let exact = classify(&Sequence::from_ints(terms.iter().copied())).unwrap();
            assert_eq!(Classification::Progression(classify_ints(&terms).unwrap()), exact);
        }
        assert_eq!(classify_ints(&[3, 3, 3]), None);
    }
}
