use std::fmt;

use crate::{Error, Result};

/// A finite subset of `{1..N}` with sorted, distinct members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntSet {
    universe: u64,
    members: Vec<u64>,
}

impl IntSet {
    /// Builds a set from members that are already sorted and distinct.
    pub fn new(universe: u64, members: Vec<u64>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::InvalidArgument("universe must be at least 1".into()));
        }
        if let Some(w) = members.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "members must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        if let (Some(&lo), Some(&hi)) = (members.first(), members.last()) {
            if lo < 1 || hi > universe {
                return Err(Error::InvalidArgument(format!(
                    "members must lie in [1, {universe}]"
                )));
            }
        }
        Ok(Self { universe, members })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(universe: u64, mut members: Vec<u64>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        Self::new(universe, members)
    }

    pub fn interval(universe: u64) -> Result<Self> {
        Self::new(universe, (1..=universe).collect())
    }

    pub fn empty(universe: u64) -> Result<Self> {
        Self::new(universe, Vec::new())
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.members.binary_search(&value).is_ok()
    }

    pub fn density(&self) -> f64 {
        self.members.len() as f64 / self.universe as f64
    }

    /// Members not in `removed`, same universe.
    pub fn without(&self, removed: &[u64]) -> IntSet {
        let mut drop: Vec<u64> = removed.to_vec();
        drop.sort_unstable();
        let members = self
            .members
            .iter()
            .copied()
            .filter(|v| drop.binary_search(v).is_err())
            .collect();
        IntSet {
            universe: self.universe,
            members,
        }
    }

    pub fn into_members(self) -> Vec<u64> {
        self.members
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}} ⊆ [{}]", self.universe)
    }
}

/// Dense membership bitmap over `0..=universe`.
#[derive(Clone, Debug)]
pub(crate) struct Bitmap {
    words: Vec<u64>,
    universe: u64,
}

impl Bitmap {
    pub(crate) fn new(set: &IntSet) -> Self {
        let universe = set.universe();
        let mut words = vec![0u64; (universe as usize >> 6) + 1];
        for &m in set.members() {
            words[(m >> 6) as usize] |= 1 << (m & 63);
        }
        Self { words, universe }
    }

    #[inline]
    pub(crate) fn contains(&self, value: i128) -> bool {
        if value < 1 || value > self.universe as i128 {
            return false;
        }
        let v = value as u64;
        self.words[(v >> 6) as usize] & (1 << (v & 63)) != 0
    }
}
