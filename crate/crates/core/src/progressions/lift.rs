use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{delta, Rational, Sequence};
use crate::{Error, Result};

/// `P(j) = Σ_i P_i j^i` with vector coefficients of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorPolynomial {
    /// `coeffs[i]` is the coefficient vector of `j^i`.
    pub coeffs: Vec<Vec<Rational>>,
}

impl VectorPolynomial {
    pub fn dim(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    pub fn eval(&self, j: i64) -> Vec<Rational> {
        let j = Rational::from_integer(BigInt::from(j));
        let mut out = vec![Rational::zero(); self.dim()];
        for c in self.coeffs.iter().rev() {
            for (o, ci) in out.iter_mut().zip(c) {
                *o = &*o * &j + ci;
            }
        }
        out
    }
}

/// Lifts points `x_1..x_k` of the torus that lie in `Box_D` and whose
/// `(D+1)`-th differences are integral to the unique degree-≤D vector
/// polynomial through them.
///
/// Because every coordinate is inside `(−2^(−D−1), 2^(−D−1))`, the
/// `(D+1)`-th differences are strictly inside `(−1, 1)` and hence zero; a
/// nonzero difference means the input broke the box hypothesis and is
/// reported as [`Error::LemmaViolation`].
pub fn lift_modular_progression(points: &[Vec<Rational>], degree: u32) -> Result<VectorPolynomial> {
    let m = degree as usize + 1;
    if points.len() < m + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least D + 2 = {} points, got {}",
            m + 1,
            points.len()
        )));
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument("points must share a nonzero dimension".into()));
    }

    let half_side = Rational::new(BigInt::one(), BigInt::one() << (degree + 1));
    for (j, p) in points.iter().enumerate() {
        if let Some(c) = p.iter().find(|c| c.abs() >= half_side) {
            return Err(Error::LemmaViolation(format!(
                "point {} has coordinate {c} outside Box_{degree}",
                j + 1
            )));
        }
    }

    let columns: Vec<Sequence> = (0..dim)
        .map(|h| Sequence::new(points.iter().map(|p| p[h].clone()).collect()))
        .collect();
    for (h, col) in columns.iter().enumerate() {
        let top = delta(col, m)?;
        if top.terms().iter().any(|t| !t.is_integer()) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {h}: differences of order D + 1 are not integral"
            )));
        }
        if !top.is_zero() {
            return Err(Error::LemmaViolation(format!(
                "coordinate {h}: differences of order D + 1 are {top}, not zero"
            )));
        }
    }

    // Newton forward form P(j) = Σ_i Δ^i x(1) · C(j − 1, i), expanded to monomials.
    let binomial_polys = binomial_monomials(degree as usize);
    let mut coeffs = vec![vec![Rational::zero(); dim]; m];
    for (h, col) in columns.iter().enumerate() {
        let mut row = col.clone();
        for (i, poly) in binomial_polys.iter().enumerate() {
            if i > 0 {
                row = row.difference();
            }
            let lead = &row.terms()[0];
            for (e, c) in poly.iter().enumerate() {
                coeffs[e][h] += lead * c;
            }
        }
    }
    let lifted = VectorPolynomial { coeffs };
    for (j, p) in points.iter().enumerate() {
        if &lifted.eval(j as i64 + 1) != p {
            return Err(Error::Internal(format!("lift does not interpolate point {}", j + 1)));
        }
    }
    Ok(lifted)
}

/// Monomial coefficients of `C(j − 1, i)` for `i = 0..=degree`.
fn binomial_monomials(degree: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::one()]];
    for i in 1..=degree {
        let prev = &out[i - 1];
        // C(j−1, i) = C(j−1, i−1) · (j − i) / i
        let shift = Rational::from_integer(BigInt::from(i));
        let mut next = vec![Rational::zero(); i + 1];
        for (e, c) in prev.iter().enumerate() {
            next[e + 1] += c / &shift;
            next[e] -= c;
        }
        out.push(next);
    }
    out
}
