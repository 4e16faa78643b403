//! Analysis configuration: poverty line, indicators, stratification variables
//! and the survey column mapping.
//!
//! The on-disk form is a flat TOML document:
//!
//! ```toml
//! poverty_line_daily = 392.0   # currency per day
//! days_per_year = 365.0        # Z = daily × days
//! indicators = ["sen", "shorrocks", "fgt:0", "ray:2"]
//! stratification = ["region", "genre"]
//! id_column = "household_id"
//! revtot_column = "REVTOT"
//! eqadul_column = "EQADUL"
//! load_mode = "strict"         # or "lenient"
//! ```
//!
//! Every key is optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpi::GpiSpec;
use crate::survey::{LoadMode, LoadedSurvey, SurveySchema};

pub const DEFAULT_POVERTY_LINE_DAILY: f64 = 392.0;
pub const DEFAULT_DAYS_PER_YEAR: f64 = 365.0;

/// Household head characteristics used by the five reference studies.
pub const REFERENCE_STUDIES: [&str; 5] = [
    "region",
    "genre",
    "ethnie",
    "etat_matrimonial",
    "instruction",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub poverty_line_daily: f64,
    pub days_per_year: f64,
    pub indicators: Vec<GpiSpec>,
    pub stratification: Vec<String>,
    pub id_column: String,
    pub revtot_column: String,
    pub eqadul_column: String,
    pub load_mode: LoadMode,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let schema = SurveySchema::default();
        Self {
            poverty_line_daily: DEFAULT_POVERTY_LINE_DAILY,
            days_per_year: DEFAULT_DAYS_PER_YEAR,
            indicators: vec![GpiSpec::Sen, GpiSpec::Shorrocks],
            stratification: Vec::new(),
            id_column: schema.id_column,
            revtot_column: schema.revtot_column,
            eqadul_column: schema.eqadul_column,
            load_mode: LoadMode::Strict,
        }
    }
}

impl AnalysisConfig {
    /// Sen and Shorrocks over the five reference stratifications.
    pub fn reference_studies() -> Self {
        Self {
            stratification: REFERENCE_STUDIES.iter().map(|s| s.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    /// Z = daily line × days per year.
    pub fn poverty_line_annual(&self) -> f64 {
        self.poverty_line_daily * self.days_per_year
    }

    pub fn schema(&self) -> SurveySchema {
        SurveySchema {
            id_column: self.id_column.clone(),
            revtot_column: self.revtot_column.clone(),
            eqadul_column: self.eqadul_column.clone(),
            strata_columns: None,
        }
    }

    fn check(&self) -> Result<()> {
        let z = self.poverty_line_annual();
        if !(z.is_finite() && z > 0.0) || self.poverty_line_daily <= 0.0 || self.days_per_year <= 0.0
        {
            return Err(Error::InvalidPovertyLine(z));
        }
        if self.indicators.is_empty() {
            return Err(Error::Config("at least one indicator is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryCount {
    pub label: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSummary {
    pub name: String,
    /// K
    pub categories: Vec<CategoryCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub poverty_line: f64,
    pub records: usize,
    pub variables: Vec<VariableSummary>,
}

/// Checks the poverty line and that every configured stratification variable
/// exists, listing its categories (first-appearance order) with counts.
pub fn validate_config(config: &AnalysisConfig, survey: &LoadedSurvey) -> Result<ValidationReport> {
    config.check()?;
    let mut variables = Vec::with_capacity(config.stratification.len());
    for name in &config.stratification {
        let categories = match survey.stratify_by(name) {
            Ok(strat) => strat
                .groups()
                .iter()
                .map(|g| CategoryCount {
                    label: g.label.clone(),
                    count: g.size(),
                })
                .collect(),
            Err(Error::EmptyPopulation) => Vec::new(),
            Err(e) => return Err(e),
        };
        variables.push(VariableSummary {
            name: name.clone(),
            categories,
        });
    }
    Ok(ValidationReport {
        poverty_line: config.poverty_line_annual(),
        records: survey.records.len(),
        variables,
    })
}
