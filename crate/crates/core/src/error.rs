use thiserror::Error;

use crate::IntSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `k ≤ D + 1`: every nonconstant k-tuple is a D-progression.
    #[error("degenerate parameters: k = {k} ≤ D + 1 = {}", degree + 1)]
    Degenerate { k: usize, degree: u32 },

    #[error("sequence is not a polynomial progression: {0}")]
    NotAProgression(String),

    #[error("lemma violation: {0}")]
    LemmaViolation(String),

    /// The constructions need `k > 2D`.
    #[error("unsupported parameters: k = {k} must exceed 2D = {}", 2 * degree)]
    Unsupported { k: usize, degree: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("coupling constraint violated: 2·δ·N0 = {coupling} exceeds 2^(-2D) = {limit}")]
    Coupling { coupling: f64, limit: f64 },

    #[error("search budget of {budget} nodes exceeded at N = {n}; best lower bound {lower_bound}")]
    BudgetExceeded {
        n: u64,
        budget: u64,
        lower_bound: usize,
        witness: IntSet,
    },

    #[error("internal error: {0}")]
    Internal(String),
}
