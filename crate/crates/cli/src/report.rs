//! JSON report documents. The layout is published in `docs/report-schema.json`;
//! bump [`SCHEMA_VERSION`] on any incompatible change.

use gpi_core::decomposition::GroupValue;
use gpi_core::simulation::{BootstrapInterval, ConvergenceStudy};
use gpi_core::survey::SkippedRow;
use gpi_core::GapReport;
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub metadata: Metadata,
    #[serde(flatten)]
    pub body: Body,
}

/// Run context. No wall-clock timestamp, so identical runs serialize
/// identically.
#[derive(Serialize, Default)]
pub struct Metadata {
    pub dataset: Option<String>,
    pub config: Option<String>,
    pub poverty_line: Option<f64>,
    pub seed: Option<u64>,
    pub households: Option<usize>,
    pub poor: Option<usize>,
    pub rows_read: Option<usize>,
    pub skipped_rows: Vec<SkippedRow>,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Body {
    Compute {
        indicators: Vec<IndicatorValue>,
    },
    Decompose {
        tables: Vec<DecompositionTable>,
    },
    Simulate {
        study: ConvergenceStudy,
    },
    Bootstrap {
        variable: String,
        categories: usize,
        intervals: Vec<BootstrapInterval>,
    },
}

#[derive(Serialize)]
pub struct IndicatorValue {
    pub indicator: String,
    pub value: f64,
}

/// One stratification: a recomposed / global / gap column per indicator.
#[derive(Serialize)]
pub struct DecompositionTable {
    pub variable: String,
    /// K
    pub categories: usize,
    pub entries: Vec<GapEntry>,
}

#[derive(Serialize)]
pub struct GapEntry {
    pub indicator: String,
    pub recomposed: f64,
    pub global: f64,
    pub gap: f64,
    /// `|gap| / |global|`, absent when the global value is zero.
    pub relative_gap: Option<f64>,
    pub groups: Vec<GroupValue>,
}

impl From<GapReport> for GapEntry {
    fn from(r: GapReport) -> Self {
        Self {
            relative_gap: r.relative_gap(),
            indicator: r.indicator,
            recomposed: r.recomposed_value,
            global: r.global_value,
            gap: r.gap,
            groups: r.groups,
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("report serializes");
        json.push('\n');
        json
    }
}
