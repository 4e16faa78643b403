use rand::seq::index;

use super::rng_for;
use crate::decomposition::{decompose, GapReport, Stratification};
use crate::error::{Error, Result};
use crate::gpi::GpiSpec;

/// Splits `total` across strata proportionally to `sizes` (largest remainder;
/// ties go to the earlier stratum).
pub fn proportional_allocation(total: usize, sizes: &[usize]) -> Vec<usize> {
    let sum: usize = sizes.iter().sum();
    if sum == 0 {
        return vec![0; sizes.len()];
    }
    let mut alloc: Vec<usize> = Vec::with_capacity(sizes.len());
    let mut remainders: Vec<(u128, usize)> = Vec::with_capacity(sizes.len());
    for (i, &s) in sizes.iter().enumerate() {
        let exact = total as u128 * s as u128;
        alloc.push((exact / sum as u128) as usize);
        remainders.push((exact % sum as u128, i));
    }
    let missing = total - alloc.iter().sum::<usize>();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in remainders.iter().take(missing) {
        alloc[i] += 1;
    }
    alloc
}

/// Draws `sub_sizes[i]` households without replacement from stratum `i`.
/// Each stratum uses its own stream derived from `seed`.
pub fn subsample(strat: &Stratification, sub_sizes: &[usize], seed: u64) -> Result<Stratification> {
    if sub_sizes.len() != strat.len() {
        return Err(Error::Config(format!(
            "{} sub-sample sizes for {} strata",
            sub_sizes.len(),
            strat.len()
        )));
    }
    let groups = strat
        .groups()
        .iter()
        .zip(sub_sizes)
        .enumerate()
        .map(|(i, (g, &n_i))| {
            if n_i > g.size() {
                return Err(Error::OversizedSubsample {
                    label: g.label.clone(),
                    requested: n_i,
                    available: g.size(),
                });
            }
            let mut rng = rng_for(seed, i as u64);
            let picked = index::sample(&mut rng, g.size(), n_i)
                .into_iter()
                .map(|j| g.incomes[j])
                .collect();
            Ok((g.label.clone(), picked))
        })
        .collect::<Result<Vec<_>>>()?;
    Stratification::from_groups(groups)
}

/// The sampled decomposability gap `dd_n`: the pooled sub-sample indicator
/// minus `Σ W_i p(n_i)` with `W_i = n_i / n`. The returned report's `gap` is
/// `dd_n`; its groups carry `n_i`, `q_i` and `W_i`.
pub fn sampled_gap(
    strat: &Stratification,
    z: f64,
    spec: &GpiSpec,
    sub_sizes: &[usize],
    seed: u64,
) -> Result<GapReport> {
    decompose(&subsample(strat, sub_sizes, seed)?, z, spec)
}
