use std::fmt;
use std::str::FromStr;

/// Inclusive range of integers, written `A`, `A..B` (exclusive) or `A..=B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Range {
    pub start: u64,
    pub end: u64,
}

impl Range {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.start..=self.end
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad number {t:?}: {e}"));
        let (start, end) = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = s.split_once("..") {
            let b = num(b)?;
            (num(a)?, b.checked_sub(1).ok_or("empty range")?)
        } else {
            let n = num(s)?;
            (n, n)
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Range { start, end })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..={}", self.start, self.end)
        }
    }
}
