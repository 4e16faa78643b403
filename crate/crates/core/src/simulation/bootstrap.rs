use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng_for;
use super::study::percentile;
use crate::decomposition::{decompose, Stratification};
use crate::error::{Error, Result};
use crate::gpi::GpiSpec;
use crate::sum::compensated_sum;

/// Percentile bootstrap interval for the decomposability gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapInterval {
    pub indicator: String,
    pub poverty_line: f64,
    /// Gap on the original data.
    pub estimate: f64,
    /// Mean of the bootstrap gaps; `bootstrap_mean - estimate` estimates the
    /// bias of the gap.
    pub bootstrap_mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl BootstrapInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn bias(&self) -> f64 {
        self.bootstrap_mean - self.estimate
    }
}

/// Resamples every stratum with replacement (keeping `N_i`), recomputes the
/// gap `replicates` times and returns the central `level` percentile interval.
pub fn bootstrap_gap_ci(
    strat: &Stratification,
    z: f64,
    spec: &GpiSpec,
    replicates: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapInterval> {
    if replicates < 100 {
        return Err(Error::InvalidParameter {
            name: "replicates",
            value: replicates as f64,
            reason: "at least 100 bootstrap replicates are required",
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter {
            name: "level",
            value: level,
            reason: "must lie strictly between 0 and 1",
        });
    }
    let estimate = decompose(strat, z, spec)?.gap;
    let mut gaps = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_for(seed, b as u64);
            let groups: Vec<(String, Vec<f64>)> = strat
                .groups()
                .iter()
                .map(|g| {
                    let drawn = (0..g.size())
                        .map(|_| g.incomes[rng.random_range(0..g.size())])
                        .collect();
                    (g.label.clone(), drawn)
                })
                .collect();
            decompose(&Stratification::from_groups(groups)?, z, spec).map(|r| r.gap)
        })
        .collect::<Result<Vec<f64>>>()?;
    let bootstrap_mean = compensated_sum(gaps.iter().copied()) / replicates as f64;
    gaps.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok(BootstrapInterval {
        indicator: spec.label(),
        poverty_line: z,
        estimate,
        bootstrap_mean,
        lower: percentile(&gaps, tail),
        upper: percentile(&gaps, 1.0 - tail),
        level,
        replicates,
        seed,
    })
}
