use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::rng_for;
use crate::config::DEFAULT_DAYS_PER_YEAR;
use crate::config::DEFAULT_POVERTY_LINE_DAILY;
use crate::decomposition::Stratification;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LognormalStratum {
    pub label: String,
    /// m, location of log-income.
    pub location: f64,
    /// σ > 0, dispersion of log-income.
    pub scale: f64,
    /// N_i ≥ 1
    pub size: usize,
}

/// `y ↦ scale · y + shift` applied after drawing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncomeTransform {
    pub scale: f64,
    #[serde(default)]
    pub shift: f64,
}

impl IncomeTransform {
    pub fn apply(&self, y: f64) -> f64 {
        self.scale * y + self.shift
    }
}

/// Per-stratum lognormal income model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LognormalSpec {
    pub strata: Vec<LognormalStratum>,
    #[serde(default)]
    pub transform: Option<IncomeTransform>,
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

impl LognormalSpec {
    /// `k` strata sharing `(location, scale)`, splitting `total` as evenly as
    /// possible (earlier strata take the remainder). Labels are `S01`, `S02`, ...
    pub fn homogeneous(k: usize, total: usize, location: f64, scale: f64) -> Self {
        let sizes = super::proportional_allocation(total, &vec![1; k]);
        Self {
            strata: sizes
                .into_iter()
                .enumerate()
                .map(|(i, size)| LognormalStratum {
                    label: format!("S{:02}", i + 1),
                    location,
                    scale,
                    size,
                })
                .collect(),
            transform: None,
        }
    }

    /// Ten strata, 3278 households, `m = -12`, `σ = 1`, rescaled so that the
    /// model's 30th percentile sits at the default annual line 392 × 365.
    pub fn reference_model() -> Self {
        let (m, sigma) = (-12.0, 1.0);
        let z = DEFAULT_POVERTY_LINE_DAILY * DEFAULT_DAYS_PER_YEAR;
        let q30 = (m + sigma * standard_normal().inverse_cdf(0.3)).exp();
        Self {
            transform: Some(IncomeTransform {
                scale: z / q30,
                shift: 0.0,
            }),
            ..Self::homogeneous(10, 3278, m, sigma)
        }
    }

    pub fn total(&self) -> usize {
        self.strata.iter().map(|s| s.size).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.size).collect()
    }

    /// The same strata with sizes reallocated proportionally to sum to `total`.
    pub fn resized(&self, total: usize) -> Self {
        let sizes = super::proportional_allocation(total, &self.sizes());
        Self {
            strata: self
                .strata
                .iter()
                .zip(sizes)
                .map(|(s, size)| LognormalStratum { size, ..s.clone() })
                .collect(),
            transform: self.transform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.strata.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        for s in &self.strata {
            if !(s.scale.is_finite() && s.scale > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "sigma",
                    value: s.scale,
                    reason: "must be finite and strictly positive",
                });
            }
            if !s.location.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "m",
                    value: s.location,
                    reason: "must be finite",
                });
            }
            if s.size == 0 {
                return Err(Error::InvalidParameter {
                    name: "size",
                    value: 0.0,
                    reason: "every stratum needs at least one household",
                });
            }
        }
        if let Some(t) = self.transform {
            if !(t.scale.is_finite() && t.scale > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "transform.scale",
                    value: t.scale,
                    reason: "must be finite and strictly positive",
                });
            }
            if !(t.shift.is_finite() && t.shift >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "transform.shift",
                    value: t.shift,
                    reason: "must be finite and non-negative",
                });
            }
        }
        Ok(())
    }

    /// Quantile `p` of the pooled (size-weighted mixture) income distribution.
    pub fn model_quantile(&self, p: f64) -> Result<f64> {
        self.validate()?;
        check_probability(p)?;
        let normal = standard_normal();
        let total = self.total() as f64;
        let cdf = |log_y: f64| -> f64 {
            self.strata
                .iter()
                .map(|s| s.size as f64 / total * normal.cdf((log_y - s.location) / s.scale))
                .sum()
        };
        let mut lo = self
            .strata
            .iter()
            .map(|s| s.location - 40.0 * s.scale)
            .fold(f64::INFINITY, f64::min);
        let mut hi = self
            .strata
            .iter()
            .map(|s| s.location + 40.0 * s.scale)
            .fold(f64::NEG_INFINITY, f64::max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let y = (0.5 * (lo + hi)).exp();
        Ok(self.transform.map_or(y, |t| t.apply(y)))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "quantile",
            value: p,
            reason: "must lie strictly between 0 and 1",
        })
    }
}

/// Draws `N_i` independent lognormal incomes per stratum. Stratum `i` uses
/// its own stream derived from `seed`.
pub fn sample_population(spec: &LognormalSpec, seed: u64) -> Result<Stratification> {
    spec.validate()?;
    let groups = spec
        .strata
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let dist = LogNormal::new(s.location, s.scale).map_err(|_| Error::InvalidParameter {
                name: "sigma",
                value: s.scale,
                reason: "rejected by the lognormal sampler",
            })?;
            let mut rng = rng_for(seed, i as u64);
            let incomes = (0..s.size)
                .map(|_| {
                    let y = dist.sample(&mut rng);
                    spec.transform.map_or(y, |t| t.apply(y))
                })
                .collect();
            Ok((s.label.clone(), incomes))
        })
        .collect::<Result<Vec<_>>>()?;
    Stratification::from_groups(groups)
}

/// `sorted[⌊p·N⌋]`: a poverty line with exactly `⌊p·N⌋` incomes strictly
/// below it when there are no ties.
pub fn empirical_quantile(values: &[f64], p: f64) -> Result<f64> {
    check_probability(p)?;
    if values.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let idx = ((p * sorted.len() as f64).floor() as usize).min(sorted.len() - 1);
    Ok(sorted[idx])
}

/// How a study fixes the poverty line Z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PovertyLine {
    /// Fixed value in income units.
    Absolute { value: f64 },
    /// Quantile `p` of each generated population.
    EmpiricalQuantile { p: f64 },
    /// Quantile `p` of the model's pooled distribution.
    ModelQuantile { p: f64 },
}

impl Default for PovertyLine {
    fn default() -> Self {
        PovertyLine::EmpiricalQuantile { p: 0.3 }
    }
}

impl PovertyLine {
    pub fn resolve(&self, spec: &LognormalSpec, population: &Stratification) -> Result<f64> {
        match *self {
            PovertyLine::Absolute { value } => {
                crate::sample::check_poverty_line(value)?;
                Ok(value)
            }
            PovertyLine::EmpiricalQuantile { p } => empirical_quantile(&population.pooled(), p),
            PovertyLine::ModelQuantile { p } => spec.model_quantile(p),
        }
    }
}
