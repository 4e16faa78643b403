//! Closed forms of the FGT, Sen, Shorrocks and Ray indicators.
//!
//! All of them return 0 when no household is poor.

use crate::error::{Error, Result};
use crate::sample::OrderedSample;
use crate::sum::compensated_sum;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must be finite and non-negative",
        })
    }
}

/// Foster-Greer-Thorbecke: `(1/N) Σ_{j≤Q} ((Z - Y_j)/Z)^α`.
///
/// `alpha = 0` is the head-count ratio `Q/N`, returned exactly.
pub fn fgt(sample: &OrderedSample, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let n = sample.n_total() as f64;
    if alpha == 0.0 {
        return Ok(sample.q_poor() as f64 / n);
    }
    let total = compensated_sum(sample.deprivations().map(|u| u.powf(alpha)));
    Ok(total / n)
}

/// Sen: `2/(N(Q+1)) Σ_{j≤Q} (Q - j + 1) (Z - Y_j)/Z`.
pub fn sen(sample: &OrderedSample) -> f64 {
    let q = sample.q_poor();
    if q == 0 {
        return 0.0;
    }
    let n = sample.n_total() as f64;
    let weighted = compensated_sum(
        sample
            .deprivations()
            .enumerate()
            .map(|(idx, u)| (q - idx) as f64 * u),
    );
    2.0 / (n * (q as f64 + 1.0)) * weighted
}

/// Shorrocks: `1/N^2 Σ_{j≤Q} (2N - 2j + 1) (Z - Y_j)/Z`.
pub fn shorrocks(sample: &OrderedSample) -> f64 {
    if sample.q_poor() == 0 {
        return 0.0;
    }
    let n = sample.n_total();
    let weighted = compensated_sum(
        sample
            .deprivations()
            .enumerate()
            // rank j = idx + 1, so 2N - 2j + 1 = 2(N - idx) - 1
            .map(|(idx, u)| (2 * (n - idx) - 1) as f64 * u),
    );
    let n = n as f64;
    weighted / (n * n)
}

/// Mean shortfall of the poor, `g = (1/Q) Σ_{j≤Q} (Z - Y_j)`, in income units.
pub fn mean_poverty_gap(sample: &OrderedSample) -> Result<f64> {
    let q = sample.q_poor();
    if q == 0 {
        return Err(Error::NoPoorHouseholds);
    }
    let z = sample.poverty_line();
    let g = compensated_sum(sample.poor().iter().map(|&y| z - y)) / q as f64;
    debug_assert!(g > 0.0);
    Ok(g)
}

/// Ray: `g/(N Z) Σ_{j≤Q} ((Z - Y_j)/g)^α` with `g` the mean poverty gap.
pub fn ray(sample: &OrderedSample, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if sample.q_poor() == 0 {
        return Ok(0.0);
    }
    let g = mean_poverty_gap(sample)?;
    Ok(ray_with_gap(sample, alpha, g))
}

pub(crate) fn ray_with_gap(sample: &OrderedSample, alpha: f64, g: f64) -> f64 {
    let z = sample.poverty_line();
    let total = compensated_sum(sample.poor().iter().map(|&y| ((z - y) / g).powf(alpha)));
    g / (sample.n_total() as f64 * z) * total
}
