//! Dense subsets of `{1..N}` that avoid k-term polynomial progressions.
//!
//! A k-term D-progression is the value sequence `Q(1), …, Q(k)` of a
//! nonconstant polynomial `Q` of degree at most `D`; `D = 1` gives ordinary
//! arithmetic progressions. This crate provides:
//!
//! * [`progressions`]: exact finite-difference calculus, detection and
//!   classification of progressions, and the torus lifting procedure;
//! * [`constructions`]: Behrend's sphere construction, the randomized
//!   torus/annuli construction with its removal step, and the recursive
//!   driver that inducts through sets free of higher-degree progressions;
//! * [`exactsolver`]: branch and bound for the exact extremal value
//!   `r_{k,D}(N)` at small `N`;
//! * [`bounds`]: closed-form density bounds, ball volumes and Monte Carlo
//!   estimates of annuli volume.
//!
//! Every set that leaves this crate marked `certified` has been re-checked by
//! the exact detector in [`progressions::find_progressions`].

pub mod bounds;
pub mod constructions;
mod error;
pub mod exactsolver;
mod intset;
pub mod progressions;
pub mod rng;

pub use error::{Error, Result};
pub use intset::IntSet;
pub use progressions::{ProgressionType, Rational, Sequence, Witness};
