//! Exact values of `r_{k,D}(N)` for small `N` by branch and bound.
//!
//! The table is built bottom-up. Since `r(N) ≤ r(N−1) + 1`, each step only
//! asks whether a free set of size `r(N−1) + 1` exists in `[N]`; such a set
//! must contain both `1` and `N` (otherwise it shifts into `[N−1]`). The
//! search fixes those two, tries the remaining values from the top down
//! (include before exclude), and prunes with the already known `r(v)`.

use std::collections::HashSet;
use std::ops::ControlFlow;

use crate::progressions::for_each_progression;
use crate::{Error, IntSet, Result};

/// Bumped whenever results could change; cached values carry it.
pub const SOLVER_VERSION: &str = "bnb-1";

/// Largest `N` the solver accepts (sets are `u128` bitmasks).
pub const MAX_N: u64 = 128;

/// Default node budget per table step.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRecord {
    pub n: u64,
    pub k: usize,
    pub degree: u32,
    pub value: usize,
    /// A largest free subset of `[n]`; the first one met by the search.
    pub witness: IntSet,
    pub method: &'static str,
}

/// Incremental solver for one `(k, D)`; keeps the table between calls.
#[derive(Clone, Debug)]
pub struct ExactSolver {
    k: usize,
    degree: u32,
    budget: u64,
    patterns_for: u64,
    /// `by_min[v]`: value sets of progressions whose smallest element other
    /// than 1 is `v`.
    by_min: Vec<Vec<u128>>,
    table: Vec<ExactRecord>,
}

fn bit(v: u64) -> u128 {
    1u128 << (v - 1)
}

fn mask_members(mask: u128) -> Vec<u64> {
    (1..=128).filter(|&v| mask & bit(v) != 0).collect()
}

impl ExactSolver {
    pub fn new(k: usize, degree: u32) -> Result<Self> {
        Self::with_budget(k, degree, DEFAULT_BUDGET)
    }

    pub fn with_budget(k: usize, degree: u32, budget: u64) -> Result<Self> {
        if degree == 0 || k < 2 {
            return Err(Error::InvalidArgument(format!(
                "exact solver needs k ≥ 2 and D ≥ 1, got k = {k}, D = {degree}"
            )));
        }
        Ok(ExactSolver {
            k,
            degree,
            budget,
            patterns_for: 0,
            by_min: Vec::new(),
            table: Vec::new(),
        })
    }

    pub fn table(&self) -> &[ExactRecord] {
        &self.table
    }

    /// Value sets of all k-term progressions inside `[n]`, grouped by the
    /// smallest element other than 1.
    fn ensure_patterns(&mut self, n: u64) -> Result<()> {
        if n <= self.patterns_for {
            return Ok(());
        }
        let universe = IntSet::interval(n)?;
        let mut seen = HashSet::new();
        for_each_progression(&universe, self.k, self.degree, |terms| {
            let mask = terms.iter().fold(0u128, |m, &t| m | bit(t as u64));
            seen.insert(mask);
            ControlFlow::Continue(())
        });
        let mut by_min = vec![Vec::new(); n as usize + 1];
        for mask in seen {
            let rest = mask & !bit(1);
            let key = if rest == 0 { 1 } else { rest.trailing_zeros() as usize + 1 };
            by_min[key].push(mask);
        }
        for group in &mut by_min {
            group.sort_unstable();
        }
        self.by_min = by_min;
        self.patterns_for = n;
        Ok(())
    }

    /// Fills the table up to `n` and returns `r_{k,D}(n)`.
    pub fn solve(&mut self, n: u64) -> Result<&ExactRecord> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidArgument(format!("N must lie in [1, {MAX_N}], got {n}")));
        }
        self.ensure_patterns(n)?;
        while (self.table.len() as u64) < n {
            let next = self.table.len() as u64 + 1;
            let record = self.step(next)?;
            self.table.push(record);
        }
        Ok(&self.table[n as usize - 1])
    }

    fn record(&self, n: u64, mask: u128) -> ExactRecord {
        let members = mask_members(mask);
        ExactRecord {
            n,
            k: self.k,
            degree: self.degree,
            value: members.len(),
            witness: IntSet::new(n, members).expect("witness lies in [n]"),
            method: "branch-and-bound",
        }
    }

    fn step(&self, n: u64) -> Result<ExactRecord> {
        if n == 1 {
            return Ok(self.record(1, bit(1)));
        }
        let prev = &self.table[n as usize - 2];
        let prev_mask = prev.witness.members().iter().fold(0u128, |m, &v| m | bit(v));
        let target = prev.value + 1;
        let mut search = Search { solver: self, nodes: 0, target };
        let start = bit(1) | bit(n);
        let found = if search.violates(start, n) || search.violates(start, 1) {
            None
        } else {
            search.dfs(start, 2, n - 1)
        };
        match found {
            Some(Ok(mask)) => Ok(self.record(n, mask)),
            None => Ok(self.record(n, prev_mask)),
            Some(Err(())) => Err(Error::BudgetExceeded {
                n,
                budget: self.budget,
                lower_bound: prev.value,
                witness: IntSet::new(n, prev.witness.members().to_vec())?,
            }),
        }
    }
}

struct Search<'a> {
    solver: &'a ExactSolver,
    nodes: u64,
    target: usize,
}

impl Search<'_> {
    /// Whether adding `v` (all other members above `v`, or 1) completes a
    /// progression.
    fn violates(&self, with_v: u128, v: u64) -> bool {
        self.solver.by_min[v as usize].iter().any(|&p| p & !with_v == 0)
    }

    /// Tries values `v, v−1, …, 2` on top of `chosen`. `Some(Ok)` on success,
    /// `Some(Err)` when the budget runs out, `None` when the subtree fails.
    fn dfs(&mut self, chosen: u128, size: usize, v: u64) -> Option<std::result::Result<u128, ()>> {
        if size >= self.target {
            return Some(Ok(chosen));
        }
        if v < 2 {
            return None;
        }
        self.nodes += 1;
        if self.nodes > self.solver.budget {
            return Some(Err(()));
        }
        // members from [2, v] together with 1 form a free subset of [v]
        if size - 1 + self.solver.table[v as usize - 1].value < self.target {
            return None;
        }
        let with_v = chosen | bit(v);
        if !self.violates(with_v, v) {
            if let Some(r) = self.dfs(with_v, size + 1, v - 1) {
                return Some(r);
            }
        }
        self.dfs(chosen, size, v - 1)
    }
}

/// `r_{k,D}(n)` with a certified-by-construction witness.
pub fn exact_r(n: u64, k: usize, degree: u32) -> Result<ExactRecord> {
    let mut solver = ExactSolver::new(k, degree)?;
    solver.solve(n).cloned()
}

/// `r_{k,D}(1), …, r_{k,D}(n_max)`.
pub fn exact_r_table(n_max: u64, k: usize, degree: u32) -> Result<Vec<ExactRecord>> {
    let mut solver = ExactSolver::new(k, degree)?;
    solver.solve(n_max)?;
    Ok(solver.table)
}
