//! Ordered income samples and the poor-household count.

use serde::Serialize;

use crate::error::{Error, Result};

/// Incomes sorted ascending together with the poverty line and the number
/// of poor households.
///
/// A household is poor iff its income is strictly below the poverty line,
/// so `values[..q_poor]` are exactly the poor incomes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderedSample {
    values: Vec<f64>,
    poverty_line: f64,
    q_poor: usize,
}

impl OrderedSample {
    /// Sorts `raw_incomes` (stable) and counts the incomes strictly below `z`.
    pub fn new(raw_incomes: Vec<f64>, z: f64) -> Result<Self> {
        check_poverty_line(z)?;
        if raw_incomes.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        if let Some((index, &value)) = raw_incomes
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidIncome { index, value });
        }
        let mut values = raw_incomes;
        values.sort_by(f64::total_cmp);
        let q_poor = values.partition_point(|&y| y < z);
        Ok(Self {
            values,
            poverty_line: z,
            q_poor,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// N
    pub fn n_total(&self) -> usize {
        self.values.len()
    }

    /// Z
    pub fn poverty_line(&self) -> f64 {
        self.poverty_line
    }

    /// Q
    pub fn q_poor(&self) -> usize {
        self.q_poor
    }

    /// Incomes of the poor, ascending: `Y_{1,N} .. Y_{Q,N}`.
    pub fn poor(&self) -> &[f64] {
        &self.values[..self.q_poor]
    }

    /// Normalized shortfalls `(Z - Y_{j,N}) / Z` of the poor, in rank order.
    pub fn deprivations(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let z = self.poverty_line;
        self.poor().iter().map(move |&y| (z - y) / z)
    }

    pub fn headcount_ratio(&self) -> f64 {
        self.q_poor as f64 / self.n_total() as f64
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Builds an [`OrderedSample`]; see [`OrderedSample::new`].
pub fn order_and_count(raw_incomes: &[f64], z: f64) -> Result<OrderedSample> {
    OrderedSample::new(raw_incomes.to_vec(), z)
}

pub(crate) fn check_poverty_line(z: f64) -> Result<()> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPovertyLine(z))
    }
}
