//! Poverty indicators of the general poverty index family and their
//! decomposability across population subgroups.
//!
//! - [`sample`]: ordered incomes and the poor-household count.
//! - [`gpi`] and [`indicators`]: the generic index functional, its Sen,
//!   Shorrocks and FGT presets, and the closed forms (plus Ray's statistic).
//! - [`decomposition`]: stratifications, barycentric recomposition and the
//!   decomposability gap, Ray's non-additive decomposition, changes over time.
//! - [`survey`] and [`config`]: household CSV ingestion and analysis settings.
//! - [`simulation`]: lognormal populations, sampled gaps, convergence studies
//!   and bootstrap intervals.
//!
//! ```
//! use gpi_core::{decompose, GpiSpec, Stratification};
//!
//! let strata = Stratification::from_groups(vec![
//!     ("A", vec![20.0, 120.0]),
//!     ("B", vec![60.0]),
//! ])?;
//! let report = decompose(&strata, 100.0, &GpiSpec::Sen)?;
//! assert!((report.gap - 0.4 / 9.0).abs() < 1e-12);
//! # Ok::<(), gpi_core::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod config;
pub mod decomposition;
pub mod error;
pub mod gpi;
pub mod indicators;
pub mod sample;
pub mod simulation;
pub mod sum;
pub mod survey;

pub use config::{validate_config, AnalysisConfig, ValidationReport};
pub use decomposition::{
    decompose, delta_decompose, ray_delta_firstorder, ray_nonadditive_decompose, stratify,
    DeltaDecomposition, GapReport, GroupValue, RayDecomposition, RayDeltaApprox, Stratification,
    Stratum,
};
pub use error::{Error, Result};
pub use gpi::{evaluate_gpi, GpiFunctional, GpiSpec};
pub use indicators::{fgt, mean_poverty_gap, ray, sen, shorrocks};
pub use sample::{order_and_count, OrderedSample};
pub use survey::{load_survey, HouseholdRecord, LoadMode, LoadedSurvey, SurveySchema};
