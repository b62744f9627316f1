use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{ProgressionType, Rational};
use crate::{Error, Result};

/// Finite sequence of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence(Vec<Rational>);

impl Sequence {
    pub fn new(terms: Vec<Rational>) -> Self {
        Sequence(terms)
    }

    pub fn from_ints<I>(terms: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        Sequence(
            terms
                .into_iter()
                .map(|t| Rational::from_integer(t.into()))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// One application of the difference operator.
    pub fn difference(&self) -> Sequence {
        Sequence(self.0.windows(2).map(|w| &w[1] - &w[0]).collect())
    }

    /// Integer terms, if every term is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|t| if t.is_integer() { t.to_integer().to_i64() } else { None })
            .collect()
    }

    /// `α·self + β·other`, termwise. Lengths must agree.
    pub fn combine(&self, alpha: &Rational, other: &Sequence, beta: &Rational) -> Sequence {
        assert_eq!(self.len(), other.len(), "length mismatch");
        Sequence(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        )
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// `n`-th differences of `s`; the result has `len(s) - n` terms.
pub fn delta(s: &Sequence, order: usize) -> Result<Sequence> {
    if order == 0 || order >= s.len() {
        return Err(Error::InvalidArgument(format!(
            "difference order {order} must be in 1..{}",
            s.len()
        )));
    }
    let mut cur = s.difference();
    for _ in 1..order {
        cur = cur.difference();
    }
    debug_assert_eq!(cur, delta_binomial(s, order));
    Ok(cur)
}

/// Closed form `Δ^n(a)_v = Σ_i C(n, i) (−1)^{n−i} a_{v+i}`.
pub(crate) fn delta_binomial(s: &Sequence, order: usize) -> Sequence {
    let mut binom = vec![BigInt::one()];
    for i in 1..=order {
        let next = &binom[i - 1] * BigInt::from(order - i + 1) / BigInt::from(i);
        binom.push(next);
    }
    let terms = (0..s.len() - order)
        .map(|v| {
            binom
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (i, c)| {
                    let term = &s.0[v + i] * Rational::from_integer(c.clone());
                    if (order - i) % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                })
        })
        .collect();
    Sequence(terms)
}

/// Whether `s` is the value sequence of a nonconstant polynomial of degree
/// at most `max_degree`.
///
/// Nonconstant sequences with at most `max_degree + 1` terms always are.
pub fn is_progression(s: &Sequence, max_degree: u32) -> bool {
    if s.is_constant() {
        return false;
    }
    let order = max_degree as usize + 1;
    if s.len() <= order {
        return true;
    }
    delta(s, order).map(|d| d.is_zero()).unwrap_or(false)
}

/// Outcome of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Constant,
    Progression(ProgressionType),
}

/// Type `(n, a, b)` of an integer sequence: the least `n` whose differences
/// are constant, the first term, and that constant.
pub fn classify(s: &Sequence) -> Result<Classification> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    if s.terms().iter().any(|t| !t.is_integer()) {
        return Err(Error::InvalidArgument(format!(
            "classification needs integer terms, got {s}"
        )));
    }
    if s.is_constant() {
        return Ok(Classification::Constant);
    }
    let start = to_i64(&s.0[0])?;
    let mut cur = s.clone();
    for n in 1..s.len() {
        cur = cur.difference();
        if cur.is_constant() && !cur.0[0].is_zero() {
            return Ok(Classification::Progression(ProgressionType {
                degree: n as u32,
                start,
                diff: to_i64(&cur.0[0])?,
            }));
        }
    }
    Err(Error::NotAProgression(format!("{s}")))
}

fn to_i64(r: &Rational) -> Result<i64> {
    r.to_integer()
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("{r} does not fit in 64 bits")))
}

/// Extends `prefix` (exactly `degree + 1` terms) to the unique `k`-term
/// sequence whose `(degree+1)`-th differences vanish.
pub fn extrapolate(prefix: &Sequence, degree: u32, k: usize) -> Result<Sequence> {
    let m = degree as usize + 1;
    if prefix.len() != m {
        return Err(Error::InvalidArgument(format!(
            "prefix has {} terms, expected {m}",
            prefix.len()
        )));
    }
    if k < m {
        return Err(Error::InvalidArgument(format!("k = {k} is shorter than the prefix")));
    }
    // Trailing diagonal of the difference table: diag[i] = last term of Δ^i.
    let mut rows = vec![prefix.clone()];
    for _ in 1..m {
        let next = rows.last().unwrap().difference();
        rows.push(next);
    }
    let mut diag: Vec<Rational> = rows.iter().map(|r| r.0.last().unwrap().clone()).collect();
    let mut terms = prefix.0.clone();
    for _ in m..k {
        for i in (0..m - 1).rev() {
            let step = diag[i + 1].clone();
            diag[i] += step;
        }
        terms.push(diag[0].clone());
    }
    Ok(Sequence(terms))
}
