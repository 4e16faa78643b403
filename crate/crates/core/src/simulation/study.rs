use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::population::{sample_population, LognormalSpec, PovertyLine};
use super::sampling::{proportional_allocation, subsample};
use super::derive_seed;
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::gpi::GpiSpec;
use crate::sum::compensated_sum;

/// Grid, replication count, seed, poverty-line rule and indicators of a
/// convergence study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyDesign {
    /// Increasing sample sizes n.
    pub grid: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    #[serde(default)]
    pub poverty_line: PovertyLine,
    pub indicators: Vec<GpiSpec>,
}

/// One sampled gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyCell {
    pub n: usize,
    pub replication: usize,
    pub indicator: String,
    pub poverty_line: f64,
    pub dd_n: f64,
    /// q
    pub poor: usize,
    /// n_i
    pub group_sizes: Vec<usize>,
    /// q_i
    pub group_poor: Vec<usize>,
}

/// Replication summary for one `(indicator, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub indicator: String,
    pub n: usize,
    pub replications: usize,
    pub mean: f64,
    /// Standard error of `mean`; zero with a single replication.
    pub std_error: f64,
    pub mean_abs: f64,
    pub median_abs: f64,
    pub q25_abs: f64,
    pub q75_abs: f64,
    pub q90_abs: f64,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub grid: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub poverty_line: PovertyLine,
    pub indicators: Vec<String>,
    pub model: LognormalSpec,
    /// Ordered by replication, then n, then indicator.
    pub cells: Vec<StudyCell>,
    /// Ordered by indicator, then n.
    pub summaries: Vec<StudySummary>,
}

impl ConvergenceStudy {
    pub fn summary(&self, indicator: &str, n: usize) -> Option<&StudySummary> {
        self.summaries
            .iter()
            .find(|s| s.indicator == indicator && s.n == n)
    }

    /// Median `|dd_n|` per grid point for `indicator`.
    pub fn median_abs_curve(&self, indicator: &str) -> Vec<f64> {
        self.grid
            .iter()
            .filter_map(|&n| self.summary(indicator, n).map(|s| s.median_abs))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("study serializes")
    }

    /// Long format: `n,replication,indicator,dd_n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,replication,indicator,dd_n\n");
        for c in &self.cells {
            out.push_str(&format!("{},{},{},{:e}\n", c.n, c.replication, c.indicator, c.dd_n));
        }
        out
    }
}

/// Linear-interpolation quantile of ascending `sorted` data.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty data");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Measures how the sampled gap `dd_n` behaves as the sample size grows.
///
/// Replication `r` draws a fresh population from `model`, resized to the
/// largest grid value, and fixes Z on it. Each grid size `n` is then a
/// proportional stratified sub-sample without replacement of that population
/// (the largest one being the population itself), shared by all indicators.
pub fn convergence_study(model: &LognormalSpec, design: &StudyDesign) -> Result<ConvergenceStudy> {
    model.validate()?;
    if design.replications == 0 {
        return Err(Error::Config("at least one replication is required".into()));
    }
    if design.indicators.is_empty() {
        return Err(Error::Config("at least one indicator is required".into()));
    }
    if design.grid.is_empty() || design.grid[0] == 0 || design.grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "the sample-size grid must be non-empty, positive and strictly increasing".into(),
        ));
    }
    let largest = *design.grid.last().unwrap();
    let base = model.resized(largest);
    if base.strata.iter().any(|s| s.size == 0) {
        return Err(Error::Config(format!(
            "largest grid size {largest} leaves a stratum empty"
        )));
    }

    let per_replication: Vec<Vec<StudyCell>> = (0..design.replications)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(design.seed, r as u64);
            let population = sample_population(&base, seed)?;
            let z = design.poverty_line.resolve(&base, &population)?;
            let mut cells = Vec::with_capacity(design.grid.len() * design.indicators.len());
            for (gi, &n) in design.grid.iter().enumerate() {
                let sizes = proportional_allocation(n, &base.sizes());
                let sub = subsample(&population, &sizes, derive_seed(seed, 1 + gi as u64))?;
                for spec in &design.indicators {
                    let report = decompose(&sub, z, spec)?;
                    debug_assert_eq!(report.groups.iter().map(|g| g.size).sum::<usize>(), report.size);
                    cells.push(StudyCell {
                        n: report.size,
                        replication: r,
                        indicator: report.indicator.clone(),
                        poverty_line: z,
                        dd_n: report.gap,
                        poor: report.poor,
                        group_sizes: report.groups.iter().map(|g| g.size).collect(),
                        group_poor: report.groups.iter().map(|g| g.poor).collect(),
                    });
                }
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;
    let cells: Vec<StudyCell> = per_replication.into_iter().flatten().collect();

    let labels: Vec<String> = design.indicators.iter().map(GpiSpec::label).collect();
    let mut summaries = Vec::new();
    for label in &labels {
        for &n in &design.grid {
            let values: Vec<f64> = cells
                .iter()
                .filter(|c| &c.indicator == label && c.n == n)
                .map(|c| c.dd_n)
                .collect();
            summaries.push(summarize(label, n, &values));
        }
    }
    Ok(ConvergenceStudy {
        grid: design.grid.clone(),
        replications: design.replications,
        seed: design.seed,
        poverty_line: design.poverty_line,
        indicators: labels,
        model: model.clone(),
        cells,
        summaries,
    })
}

fn summarize(indicator: &str, n: usize, values: &[f64]) -> StudySummary {
    let count = values.len();
    let mean = compensated_sum(values.iter().copied()) / count as f64;
    let std_error = if count > 1 {
        let ss = compensated_sum(values.iter().map(|v| (v - mean).powi(2)));
        (ss / (count - 1) as f64).sqrt() / (count as f64).sqrt()
    } else {
        0.0
    };
    let mut abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    abs.sort_by(f64::total_cmp);
    StudySummary {
        indicator: indicator.to_owned(),
        n,
        replications: count,
        mean,
        std_error,
        mean_abs: compensated_sum(abs.iter().copied()) / count as f64,
        median_abs: percentile(&abs, 0.5),
        q25_abs: percentile(&abs, 0.25),
        q75_abs: percentile(&abs, 0.75),
        q90_abs: percentile(&abs, 0.9),
        max_abs: *abs.last().unwrap(),
    }
}
