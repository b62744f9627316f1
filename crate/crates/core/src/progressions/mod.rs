//! Finite differences and polynomial progressions.
//!
//! A nonconstant sequence is a D-progression exactly when its `(D+1)`-th
//! differences vanish. All arithmetic here is exact: rationals for general
//! sequences and checked integers on the detection hot path.

mod detect;
mod lift;
mod sequence;

use std::fmt;

pub use detect::{count_types, detection_cost, find_progressions, Witness};
pub(crate) use detect::{for_each_progression, has_progression};
pub use lift::{lift_modular_progression, VectorPolynomial};
pub use sequence::{classify, delta, extrapolate, is_progression, Classification, Sequence};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// A type-`(n, a, b)` progression: first term `a`, and `n`-th differences
/// equal to the nonzero constant `b`, with `n` minimal.
///
/// Ordering is lexicographic on `(degree, start, diff)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgressionType {
    pub degree: u32,
    pub start: i64,
    pub diff: i64,
}

impl fmt::Display for ProgressionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.degree, self.start, self.diff)
    }
}
