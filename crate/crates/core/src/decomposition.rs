//! Subgroup decomposition of poverty indicators.
//!
//! A population split into K labeled strata is decomposable for an indicator
//! when the pooled value equals the barycenter `Σ ω_i P_i` of the per-stratum
//! values with `ω_i = N_i / N`. The difference, global minus recomposed, is
//! the decomposability gap. It is identically zero for FGT and generally
//! non-zero (of either sign) for Sen and Shorrocks.
//!
//! Ray's indicator recomposes exactly, but with value-dependent weights
//! `(N_i/N)(g_i/g)^(α-1)`; see [`ray_nonadditive_decompose`].

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpi::GpiSpec;
use crate::indicators::{mean_poverty_gap, ray_with_gap};
use crate::sample::{check_poverty_line, OrderedSample};
use crate::sum::compensated_sum;

/// One labeled subgroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub label: String,
    pub incomes: Vec<f64>,
}

impl Stratum {
    pub fn size(&self) -> usize {
        self.incomes.len()
    }
}

/// A partition of a population into non-empty labeled strata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratification {
    groups: Vec<Stratum>,
    total: usize,
    /// Expected labels that received no record. They carry no weight.
    missing_labels: Vec<String>,
}

impl Stratification {
    /// Builds a partition from explicit groups, in the given order.
    pub fn from_groups<L: Into<String>>(groups: Vec<(L, Vec<f64>)>) -> Result<Self> {
        let groups: Vec<Stratum> = groups
            .into_iter()
            .map(|(label, incomes)| Stratum {
                label: label.into(),
                incomes,
            })
            .collect();
        if groups.is_empty() || groups.iter().all(|g| g.incomes.is_empty()) {
            return Err(Error::EmptyPopulation);
        }
        let mut seen = HashMap::new();
        for (index, g) in groups.iter().enumerate() {
            if g.label.trim().is_empty() {
                return Err(Error::EmptyLabel { index });
            }
            if seen.insert(g.label.as_str(), index).is_some() {
                return Err(Error::DuplicateStratum(g.label.clone()));
            }
        }
        let (groups, missing): (Vec<_>, Vec<_>) =
            groups.into_iter().partition(|g| !g.incomes.is_empty());
        let total = groups.iter().map(Stratum::size).sum();
        Ok(Self {
            groups,
            total,
            missing_labels: missing.into_iter().map(|g| g.label).collect(),
        })
    }

    pub fn groups(&self) -> &[Stratum] {
        &self.groups
    }

    /// K, the number of non-empty strata.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// N
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn missing_labels(&self) -> &[String] {
        &self.missing_labels
    }

    /// `ω_i = N_i / N`, in group order.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.groups.iter().map(|g| g.size() as f64 / n).collect()
    }

    /// All incomes, concatenated in group order.
    pub fn pooled(&self) -> Vec<f64> {
        let mut all = Vec::with_capacity(self.total);
        for g in &self.groups {
            all.extend_from_slice(&g.incomes);
        }
        all
    }
}

/// Partitions `(income, label)` records.
///
/// Groups follow first appearance, or the order of `expected_labels` when
/// given; in that case any other label is rejected and expected labels with
/// no record end up in [`Stratification::missing_labels`].
pub fn stratify<I, L>(records: I, expected_labels: Option<&[String]>) -> Result<Stratification>
where
    I: IntoIterator<Item = (f64, L)>,
    L: AsRef<str>,
{
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    let mut index_of: HashMap<String, usize> = HashMap::new();
    if let Some(expected) = expected_labels {
        for label in expected {
            if index_of.contains_key(label) {
                return Err(Error::DuplicateStratum(label.clone()));
            }
            index_of.insert(label.clone(), groups.len());
            groups.push((label.clone(), Vec::new()));
        }
    }
    let mut count = 0usize;
    for (index, (income, label)) in records.into_iter().enumerate() {
        count += 1;
        let label = label.as_ref();
        if label.trim().is_empty() {
            return Err(Error::EmptyLabel { index });
        }
        let slot = match index_of.get(label) {
            Some(&slot) => slot,
            None if expected_labels.is_some() => {
                return Err(Error::UnknownStratum {
                    index,
                    label: label.to_owned(),
                })
            }
            None => {
                index_of.insert(label.to_owned(), groups.len());
                groups.push((label.to_owned(), Vec::new()));
                groups.len() - 1
            }
        };
        groups[slot].1.push(income);
    }
    if count == 0 {
        return Err(Error::EmptyPopulation);
    }
    Stratification::from_groups(groups)
}

/// Per-stratum line of a [`GapReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupValue {
    pub label: String,
    /// N_i
    pub size: usize,
    /// Q_i
    pub poor: usize,
    /// ω_i = N_i / N
    pub weight: f64,
    /// P(N_i, Y^i, Q_i)
    pub value: f64,
}

/// Global value, per-stratum values, recomposition and signed gap of one
/// indicator under one stratification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub indicator: String,
    pub poverty_line: f64,
    /// N
    pub size: usize,
    /// Q
    pub poor: usize,
    pub global_value: f64,
    pub groups: Vec<GroupValue>,
    /// Σ ω_i P_i
    pub recomposed_value: f64,
    /// global − recomposed
    pub gap: f64,
}

impl GapReport {
    pub fn abs_gap(&self) -> f64 {
        self.gap.abs()
    }

    /// `|gap| / global`, undefined when the global value is zero.
    pub fn relative_gap(&self) -> Option<f64> {
        (self.global_value != 0.0).then(|| self.gap.abs() / self.global_value.abs())
    }
}

/// Σ over groups of `term(i)`, reduced in label order so that listing the
/// groups differently yields bit-identical totals.
fn sum_in_label_order<F: Fn(usize) -> f64>(labels: &[&str], term: F) -> f64 {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| labels[a].cmp(labels[b]));
    compensated_sum(order.into_iter().map(term))
}

/// Evaluates `spec` on the pooled population and on every stratum against the
/// common poverty line `z`, and reports the barycentric recomposition and gap.
pub fn decompose(strat: &Stratification, z: f64, spec: &GpiSpec) -> Result<GapReport> {
    check_poverty_line(z)?;
    let pooled = OrderedSample::new(strat.pooled(), z)?;
    let global_value = spec.evaluate(&pooled)?;
    let n = strat.total() as f64;
    let mut groups = Vec::with_capacity(strat.len());
    for g in strat.groups() {
        let sample = OrderedSample::new(g.incomes.clone(), z)?;
        groups.push(GroupValue {
            label: g.label.clone(),
            size: g.size(),
            poor: sample.q_poor(),
            weight: g.size() as f64 / n,
            value: spec.evaluate(&sample)?,
        });
    }
    assert_eq!(
        groups.iter().map(|g| g.poor).sum::<usize>(),
        pooled.q_poor(),
        "poor counts of the strata must add up to the pooled count"
    );
    let labels: Vec<&str> = groups.iter().map(|g| g.label.as_str()).collect();
    let recomposed_value = sum_in_label_order(&labels, |i| groups[i].weight * groups[i].value);
    Ok(GapReport {
        indicator: spec.label(),
        poverty_line: z,
        size: pooled.n_total(),
        poor: pooled.q_poor(),
        global_value,
        recomposed_value,
        gap: global_value - recomposed_value,
        groups,
    })
}

/// Per-stratum line of a [`RayDecomposition`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayGroupTerm {
    pub label: String,
    pub size: usize,
    pub poor: usize,
    /// g_i, absent when the stratum has no poor household.
    pub mean_gap: Option<f64>,
    /// `(N_i/N)(g_i/g)^(α-1)`, absent when the stratum has no poor household.
    pub weight: Option<f64>,
    /// R_i
    pub value: f64,
}

/// Ray's exact recomposition with value-dependent weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayDecomposition {
    pub alpha: f64,
    pub poverty_line: f64,
    pub size: usize,
    pub poor: usize,
    /// g over all poor households of the pooled population.
    pub mean_gap: f64,
    pub global_value: f64,
    pub groups: Vec<RayGroupTerm>,
    /// `Σ (N_i/N)(g_i/g)^(α-1) R_i` over strata with poor households.
    pub recomposed_value: f64,
    /// global − recomposed; zero up to rounding.
    pub discrepancy: f64,
    /// Strata left out of the weighted sum because `Q_i = 0`.
    pub groups_without_poor: Vec<String>,
}

impl RayDecomposition {
    /// Sum of the defined weights; in general not 1.
    pub fn weight_total(&self) -> f64 {
        compensated_sum(self.groups.iter().filter_map(|g| g.weight))
    }
}

/// Decomposes Ray's indicator as `R = Σ (N_i/N)(g_i/g)^(α-1) R_i`.
///
/// Strata without poor households contribute nothing to `R`; they are listed
/// in `groups_without_poor` and carry no weight.
pub fn ray_nonadditive_decompose(
    strat: &Stratification,
    z: f64,
    alpha: f64,
) -> Result<RayDecomposition> {
    check_poverty_line(z)?;
    let pooled = OrderedSample::new(strat.pooled(), z)?;
    // validates alpha
    crate::indicators::ray(&pooled, alpha)?;
    let g = mean_poverty_gap(&pooled)?;
    let global_value = ray_with_gap(&pooled, alpha, g);
    let n = strat.total() as f64;
    let mut groups = Vec::with_capacity(strat.len());
    let mut groups_without_poor = Vec::new();
    for s in strat.groups() {
        let sample = OrderedSample::new(s.incomes.clone(), z)?;
        let term = if sample.q_poor() == 0 {
            groups_without_poor.push(s.label.clone());
            RayGroupTerm {
                label: s.label.clone(),
                size: s.size(),
                poor: 0,
                mean_gap: None,
                weight: None,
                value: 0.0,
            }
        } else {
            let g_i = mean_poverty_gap(&sample)?;
            RayGroupTerm {
                label: s.label.clone(),
                size: s.size(),
                poor: sample.q_poor(),
                mean_gap: Some(g_i),
                weight: Some(s.size() as f64 / n * (g_i / g).powf(alpha - 1.0)),
                value: ray_with_gap(&sample, alpha, g_i),
            }
        };
        groups.push(term);
    }
    let labels: Vec<&str> = groups.iter().map(|t| t.label.as_str()).collect();
    let recomposed_value = sum_in_label_order(&labels, |i| {
        groups[i].weight.map_or(0.0, |w| w * groups[i].value)
    });
    Ok(RayDecomposition {
        alpha,
        poverty_line: z,
        size: pooled.n_total(),
        poor: pooled.q_poor(),
        mean_gap: g,
        global_value,
        recomposed_value,
        discrepancy: global_value - recomposed_value,
        groups,
        groups_without_poor,
    })
}

/// Contribution of one stratum to a change of the global indicator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDelta {
    pub label: String,
    pub weight: f64,
    /// ΔP_i
    pub delta: f64,
    /// ω_i ΔP_i
    pub contribution: f64,
}

/// Change of an indicator between two observations of the same strata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaDecomposition {
    pub indicator: String,
    /// ΔP on the pooled population.
    pub global_delta: f64,
    pub groups: Vec<GroupDelta>,
    /// Σ ω_i ΔP_i
    pub recomposed_delta: f64,
    /// ΔP − Σ ω_i ΔP_i, the change of the gap; zero for additive indicators.
    pub residual: f64,
}

/// Splits `after − before` into per-stratum contributions `ω_i ΔP_i` with
/// weights held fixed.
pub fn delta_decompose(before: &GapReport, after: &GapReport) -> Result<DeltaDecomposition> {
    if before.indicator != after.indicator {
        return Err(Error::IncompatibleReports(format!(
            "indicator {} vs {}",
            before.indicator, after.indicator
        )));
    }
    if before.groups.len() != after.groups.len() {
        return Err(Error::IncompatibleReports(format!(
            "{} strata vs {}",
            before.groups.len(),
            after.groups.len()
        )));
    }
    for (b, a) in before.groups.iter().zip(&after.groups) {
        if b.label != a.label || b.size != a.size {
            return Err(Error::IncompatibleReports(format!(
                "stratum {:?} (N={}) vs {:?} (N={})",
                b.label, b.size, a.label, a.size
            )));
        }
    }
    let groups: Vec<GroupDelta> = before
        .groups
        .iter()
        .zip(&after.groups)
        .map(|(b, a)| {
            let delta = a.value - b.value;
            GroupDelta {
                label: b.label.clone(),
                weight: b.weight,
                delta,
                contribution: b.weight * delta,
            }
        })
        .collect();
    let labels: Vec<&str> = groups.iter().map(|g| g.label.as_str()).collect();
    let recomposed_delta = sum_in_label_order(&labels, |i| groups[i].contribution);
    let global_delta = after.global_value - before.global_value;
    Ok(DeltaDecomposition {
        indicator: before.indicator.clone(),
        global_delta,
        groups,
        recomposed_delta,
        residual: global_delta - recomposed_delta,
    })
}

/// Exact change of Ray's indicator against its first-order expansion in the
/// changes of the stratum values and mean gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayDeltaApprox {
    pub exact_delta: f64,
    pub first_order: f64,
    /// |exact − first order|
    pub discrepancy: f64,
}

/// Compares the exact ΔR with
///
/// ```text
/// Σ (n_i/N)(g_i/g)^(α-1) ΔR_i + Σ (α-1)(n_i/N) ((g Δg_i − g_i Δg)/g²) (g_i/g)^(α-2) R_i
/// ```
///
/// evaluated at the `before` state. Strata must match in label and size and
/// hold poor households in both states.
pub fn ray_delta_firstorder(
    before: &Stratification,
    after: &Stratification,
    z: f64,
    alpha: f64,
) -> Result<RayDeltaApprox> {
    let b = ray_nonadditive_decompose(before, z, alpha)?;
    let a = ray_nonadditive_decompose(after, z, alpha)?;
    if b.groups.len() != a.groups.len() {
        return Err(Error::IncompatibleReports(format!(
            "{} strata vs {}",
            b.groups.len(),
            a.groups.len()
        )));
    }
    if let Some(label) = b.groups_without_poor.iter().chain(&a.groups_without_poor).next() {
        return Err(Error::GroupWithoutPoor(label.clone()));
    }
    let n = b.size as f64;
    let g = b.mean_gap;
    let dg = a.mean_gap - g;
    let mut terms = Vec::with_capacity(b.groups.len());
    for (bt, at) in b.groups.iter().zip(&a.groups) {
        if bt.label != at.label || bt.size != at.size {
            return Err(Error::IncompatibleReports(format!(
                "stratum {:?} (N={}) vs {:?} (N={})",
                bt.label, bt.size, at.label, at.size
            )));
        }
        let share = bt.size as f64 / n;
        let (g_i, g_i_after) = (bt.mean_gap.unwrap(), at.mean_gap.unwrap());
        let dg_i = g_i_after - g_i;
        let ratio = g_i / g;
        let direct = share * ratio.powf(alpha - 1.0) * (at.value - bt.value);
        let weight_shift = (alpha - 1.0) * share * ((g * dg_i - g_i * dg) / (g * g))
            * ratio.powf(alpha - 2.0)
            * bt.value;
        terms.push(direct + weight_shift);
    }
    let first_order = compensated_sum(terms);
    let exact_delta = a.global_value - b.global_value;
    Ok(RayDeltaApprox {
        exact_delta,
        first_order,
        discrepancy: (exact_delta - first_order).abs(),
    })
}
