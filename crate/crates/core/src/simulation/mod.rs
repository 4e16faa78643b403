//! Synthetic lognormal populations, sampled decomposability gaps, and the
//! Monte Carlo studies built on them.
//!
//! Every stochastic function takes an explicit `u64` seed. Independent
//! streams (strata, replications, grid points) get their own generator seeded
//! with [`derive_seed`], so results do not depend on how work is scheduled
//! across threads.

mod bootstrap;
mod population;
mod sampling;
mod study;

pub use bootstrap::{bootstrap_gap_ci, BootstrapInterval};
pub use population::{
    empirical_quantile, sample_population, IncomeTransform, LognormalSpec, LognormalStratum,
    PovertyLine,
};
pub use sampling::{proportional_allocation, sampled_gap, subsample};
pub use study::{
    convergence_study, percentile, ConvergenceStudy, StudyCell, StudyDesign, StudySummary,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of sub-stream `index` of `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix(master ^ mix(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub(crate) fn rng_for(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}
