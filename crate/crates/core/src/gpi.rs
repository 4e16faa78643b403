//! The general poverty index functional and its named presets.
//!
//! A member of the family is fixed by an outer transform `δ`, a rank weight
//! `w`, a deprivation function `d`, a normalizer `A(Q, N, Z)` and four
//! constants `μ1..μ4`:
//!
//! ```text
//! P = δ( A(Q,N,Z) / (N B(Q,N)) Σ_{j=1..Q} w(μ1 N + μ2 Q − μ3 j + μ4) d((Z − Y_{j,N}) / Z) )
//! B(Q,N) = Σ_{j=1..Q} w(j)
//! ```
//!
//! Sen, Shorrocks and FGT are members; Ray is not (its normalization depends
//! on the mean poverty gap of the sample), so it is only available through
//! its closed form.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::indicators;
use crate::sample::OrderedSample;
use crate::sum::compensated_sum;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type NormalizerFn = Arc<dyn Fn(usize, usize, f64) -> f64 + Send + Sync>;

/// The functional pieces of one member of the index family.
#[derive(Clone)]
pub struct GpiFunctional {
    pub name: String,
    /// δ
    pub outer: ScalarFn,
    /// w
    pub rank_weight: ScalarFn,
    /// d
    pub deprivation: ScalarFn,
    /// A(Q, N, Z)
    pub normalizer: NormalizerFn,
    /// μ1..μ4
    pub mu: [f64; 4],
}

impl GpiFunctional {
    /// `B(Q, N) = Σ_{j=1..Q} w(j)`.
    pub fn rank_weight_total(&self, q_poor: usize) -> f64 {
        compensated_sum((1..=q_poor).map(|j| (self.rank_weight)(j as f64)))
    }
}

impl fmt::Debug for GpiFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GpiFunctional")
            .field("name", &self.name)
            .field("mu", &self.mu)
            .finish_non_exhaustive()
    }
}

/// A member of the index family: one of the four instantiated families, or
/// caller-supplied functional pieces.
#[derive(Debug, Clone)]
pub enum GpiSpec {
    Sen,
    Shorrocks,
    Fgt { alpha: f64 },
    Ray { alpha: f64 },
    Custom(GpiFunctional),
}

fn identity() -> ScalarFn {
    Arc::new(|x| x)
}

impl GpiSpec {
    pub fn fgt(alpha: f64) -> Self {
        GpiSpec::Fgt { alpha }
    }

    pub fn ray(alpha: f64) -> Self {
        GpiSpec::Ray { alpha }
    }

    /// Report label: `SEN`, `SHORROCKS`, `FGT(α)`, `RAY(α)`, or the custom name.
    pub fn label(&self) -> String {
        match self {
            GpiSpec::Sen => "SEN".to_owned(),
            GpiSpec::Shorrocks => "SHORROCKS".to_owned(),
            GpiSpec::Fgt { alpha } => format!("FGT({alpha})"),
            GpiSpec::Ray { alpha } => format!("RAY({alpha})"),
            GpiSpec::Custom(f) => f.name.clone(),
        }
    }

    /// Additive indicators have a zero decomposability gap by construction.
    pub fn is_additive(&self) -> bool {
        matches!(self, GpiSpec::Fgt { .. })
    }

    /// The generic-form pieces of this indicator, if it has one.
    ///
    /// | preset    | w(x) | d(u) | A(Q,N,Z)      | μ            |
    /// |-----------|------|------|---------------|--------------|
    /// | SEN       | x    | u    | Q             | (0, 1, 1, 1) |
    /// | SHORROCKS | x    | u    | Q(Q+1)/(2N)   | (2, 0, 2, 1) |
    /// | FGT(α)    | 1    | u^α  | Q             | (0, 0, 0, 0) |
    ///
    /// With `w(x) = x`, `B(Q,N) = Q(Q+1)/2`; with `w ≡ 1`, `B(Q,N) = Q`.
    pub fn functional(&self) -> Option<GpiFunctional> {
        match self {
            GpiSpec::Sen => Some(GpiFunctional {
                name: self.label(),
                outer: identity(),
                rank_weight: identity(),
                deprivation: identity(),
                normalizer: Arc::new(|q, _, _| q as f64),
                mu: [0.0, 1.0, 1.0, 1.0],
            }),
            GpiSpec::Shorrocks => Some(GpiFunctional {
                name: self.label(),
                outer: identity(),
                rank_weight: identity(),
                deprivation: identity(),
                normalizer: Arc::new(|q, n, _| (q as f64) * (q as f64 + 1.0) / (2.0 * n as f64)),
                mu: [2.0, 0.0, 2.0, 1.0],
            }),
            GpiSpec::Fgt { alpha } => {
                let alpha = *alpha;
                Some(GpiFunctional {
                    name: self.label(),
                    outer: identity(),
                    rank_weight: Arc::new(|_| 1.0),
                    deprivation: Arc::new(move |u| u.powf(alpha)),
                    normalizer: Arc::new(|q, _, _| q as f64),
                    mu: [0.0; 4],
                })
            }
            GpiSpec::Ray { .. } => None,
            GpiSpec::Custom(f) => Some(f.clone()),
        }
    }

    /// Evaluates the indicator; presets take their closed-form path.
    pub fn evaluate(&self, sample: &OrderedSample) -> Result<f64> {
        match self {
            GpiSpec::Sen => Ok(indicators::sen(sample)),
            GpiSpec::Shorrocks => Ok(indicators::shorrocks(sample)),
            GpiSpec::Fgt { alpha } => indicators::fgt(sample, *alpha),
            GpiSpec::Ray { alpha } => indicators::ray(sample, *alpha),
            GpiSpec::Custom(f) => evaluate_functional(sample, f),
        }
    }
}

impl fmt::Display for GpiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `sen`, `shorrocks`, `fgt:α`/`fgt(α)` and `ray:α`/`ray(α)`,
/// case-insensitively.
impl FromStr for GpiSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownIndicator(s.to_owned());
        let lower = s.trim().to_ascii_lowercase();
        let (name, param) = match lower.split_once([':', '(']) {
            Some((name, rest)) => (name.trim(), Some(rest.trim_end_matches(')').trim())),
            None => (lower.as_str(), None),
        };
        let alpha = |p: Option<&str>| -> Result<f64> {
            let value: f64 = p.ok_or_else(unknown)?.parse().map_err(|_| unknown())?;
            if value.is_finite() && value >= 0.0 {
                Ok(value)
            } else {
                Err(Error::InvalidParameter {
                    name: "alpha",
                    value,
                    reason: "must be finite and non-negative",
                })
            }
        };
        match (name, param) {
            ("sen", None) => Ok(GpiSpec::Sen),
            ("shorrocks", None) => Ok(GpiSpec::Shorrocks),
            ("fgt", p) => Ok(GpiSpec::Fgt { alpha: alpha(p)? }),
            ("ray", p) => Ok(GpiSpec::Ray { alpha: alpha(p)? }),
            _ => Err(unknown()),
        }
    }
}

impl Serialize for GpiSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for GpiSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Evaluates `spec` through the generic functional form.
///
/// Returns `δ(0)` when `Q = 0`. Ray has no generic form and yields
/// [`Error::NotGpiForm`].
pub fn evaluate_gpi(sample: &OrderedSample, spec: &GpiSpec) -> Result<f64> {
    if let GpiSpec::Fgt { alpha } | GpiSpec::Ray { alpha } = spec {
        if !(alpha.is_finite() && *alpha >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: *alpha,
                reason: "must be finite and non-negative",
            });
        }
    }
    let functional = spec
        .functional()
        .ok_or_else(|| Error::NotGpiForm(spec.label()))?;
    evaluate_functional(sample, &functional)
}

fn evaluate_functional(sample: &OrderedSample, f: &GpiFunctional) -> Result<f64> {
    let q = sample.q_poor();
    if q == 0 {
        return Ok((f.outer)(0.0));
    }
    let n = sample.n_total();
    let b = f.rank_weight_total(q);
    if b == 0.0 || !b.is_finite() {
        return Err(Error::DegenerateNormalizer { q_poor: q });
    }
    let [mu1, mu2, mu3, mu4] = f.mu;
    let (nf, qf) = (n as f64, q as f64);
    let inner = compensated_sum(sample.deprivations().enumerate().map(|(idx, u)| {
        let rank = (idx + 1) as f64;
        (f.rank_weight)(mu1 * nf + mu2 * qf - mu3 * rank + mu4) * (f.deprivation)(u)
    }));
    let a = (f.normalizer)(q, n, sample.poverty_line());
    Ok((f.outer)(a / (nf * b) * inner))
}
