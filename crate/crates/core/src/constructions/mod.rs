//! Set builders.
//!
//! * [`build_behrend_set`]: lattice points on one sphere in `{1..P−1}^d`,
//!   mapped to integers by base-`2P` digits.
//! * [`build_torus_set`]: integers `n` whose torus image `nθ + a mod 1`
//!   lands in a union of thin spherical shells inside a small box, followed
//!   by the removal step that deletes the start of every progression type.
//! * [`rankin_driver`]: recursive driver; the shells are indexed by a set
//!   free of k-term `2D`-progressions built one level down.

mod annuli;
mod behrend;
mod params;
mod rankin;
mod torus;

pub use annuli::{annuli_contains, choose_z, AnnuliParams, AnnuliSpec, TorusPoint, GUARD_BAND, Z_GRID};
pub use behrend::{
    behrend_image_max, behrend_map, build_behrend_set, choose_behrend_params, shell_counts,
    BehrendDetails,
};
pub use params::{
    base_case_dim, delta_asymptotic, delta_formula, f_constant, inductive_dim, mu_sigma, n0_formula, MuSigma,
};
pub use rankin::{
    plan_level, plan_rankin, rankin_driver, DriverOptions, InnerSource, LevelPlan, LevelRecord,
    RankinDetails,
};
pub use torus::{
    build_torus_set, ConstructionResult, Details, TorusConfig, TorusDetails, TorusEmbedding,
    VerifyPolicy,
};
