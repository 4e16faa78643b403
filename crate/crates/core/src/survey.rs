//! Household survey CSV ingestion.
//!
//! Each data row yields one [`HouseholdRecord`]. Income per adult equivalent
//! is `REVTOT / EQADUL`; every column outside the id/REVTOT/EQADUL triple (or
//! the explicitly listed ones) is kept as a categorical stratification
//! variable. Data row numbers are 1-based and exclude the header.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decomposition::{stratify, Stratification};
use crate::error::{Error, Result};

/// Label given to a blank stratification cell.
pub const UNDECLARED: &str = "NON DECLARE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HouseholdRecord {
    pub household_id: String,
    /// Total household income per year.
    pub revtot: f64,
    /// Adult-equivalent scale, > 0.
    pub eqadul: f64,
    /// Stratification variable → category label.
    pub strata: BTreeMap<String, String>,
}

impl HouseholdRecord {
    /// Annual income per adult equivalent.
    pub fn derived_income(&self) -> f64 {
        self.revtot / self.eqadul
    }
}

/// Column mapping of a survey file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveySchema {
    pub id_column: String,
    pub revtot_column: String,
    pub eqadul_column: String,
    /// `None` keeps every other column as a stratification variable.
    pub strata_columns: Option<Vec<String>>,
}

impl Default for SurveySchema {
    fn default() -> Self {
        Self {
            id_column: "household_id".to_owned(),
            revtot_column: "REVTOT".to_owned(),
            eqadul_column: "EQADUL".to_owned(),
            strata_columns: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoadMode {
    /// The first invalid row aborts the load.
    #[default]
    Strict,
    /// Invalid rows are skipped and listed.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadedSurvey {
    pub records: Vec<HouseholdRecord>,
    /// Stratification variables available on every record.
    pub variables: Vec<String>,
    pub rows_read: usize,
    pub skipped: Vec<SkippedRow>,
}

impl LoadedSurvey {
    pub fn incomes(&self) -> Vec<f64> {
        self.records.iter().map(HouseholdRecord::derived_income).collect()
    }

    /// Partitions the records by `variable`, in order of first appearance.
    pub fn stratify_by(&self, variable: &str) -> Result<Stratification> {
        if !self.variables.iter().any(|v| v == variable) {
            return Err(Error::UnknownVariable(variable.to_owned()));
        }
        stratify(
            self.records
                .iter()
                .map(|r| (r.derived_income(), r.strata[variable].as_str())),
            None,
        )
    }
}

pub fn load_survey(path: &Path, schema: &SurveySchema, mode: LoadMode) -> Result<LoadedSurvey> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    read_survey(file, schema, mode)
}

pub fn read_survey<R: Read>(reader: R, schema: &SurveySchema, mode: LoadMode) -> Result<LoadedSurvey> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers()?.clone();
    if header.iter().all(str::is_empty) {
        return Err(Error::EmptyPopulation);
    }
    let position = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    };
    let id_at = position(&schema.id_column)?;
    let revtot_at = position(&schema.revtot_column)?;
    let eqadul_at = position(&schema.eqadul_column)?;
    let strata: Vec<(String, usize)> = match &schema.strata_columns {
        Some(columns) => columns
            .iter()
            .map(|c| Ok((c.clone(), position(c)?)))
            .collect::<Result<_>>()?,
        None => header
            .iter()
            .enumerate()
            .filter(|(i, _)| ![id_at, revtot_at, eqadul_at].contains(i))
            .map(|(i, h)| (h.to_owned(), i))
            .collect(),
    };

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut rows_read = 0;
    for (idx, row) in csv.records().enumerate() {
        let row_number = idx + 1;
        rows_read += 1;
        let parsed = row
            .map_err(Error::from)
            .and_then(|row| parse_row(&row, row_number, schema, [id_at, revtot_at, eqadul_at], &strata));
        match (parsed, mode) {
            (Ok(record), _) => records.push(record),
            (Err(e), LoadMode::Strict) => return Err(e),
            (Err(e), LoadMode::Lenient) => skipped.push(SkippedRow {
                row: row_number,
                reason: e.to_string(),
            }),
        }
    }
    Ok(LoadedSurvey {
        records,
        variables: strata.into_iter().map(|(name, _)| name).collect(),
        rows_read,
        skipped,
    })
}

fn parse_row(
    row: &csv::StringRecord,
    row_number: usize,
    schema: &SurveySchema,
    [id_at, revtot_at, eqadul_at]: [usize; 3],
    strata: &[(String, usize)],
) -> Result<HouseholdRecord> {
    let number = |at: usize, column: &str| -> Result<f64> {
        let raw = row.get(at).unwrap_or("");
        let parse_error = |message: &str| Error::ParseError {
            row: row_number,
            column: column.to_owned(),
            message: message.to_owned(),
        };
        if raw.is_empty() {
            return Err(parse_error("missing value"));
        }
        let value: f64 = raw
            .parse()
            .map_err(|_| parse_error(&format!("not a number: {raw:?}")))?;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(parse_error("not finite"))
        }
    };
    let revtot = number(revtot_at, &schema.revtot_column)?;
    if revtot < 0.0 {
        return Err(Error::ParseError {
            row: row_number,
            column: schema.revtot_column.clone(),
            message: format!("negative income {revtot}"),
        });
    }
    let eqadul = number(eqadul_at, &schema.eqadul_column)?;
    if eqadul <= 0.0 {
        return Err(Error::NonPositiveEqadul(row_number));
    }
    let strata = strata
        .iter()
        .map(|(name, at)| {
            let label = row.get(*at).unwrap_or("");
            let label = if label.is_empty() { UNDECLARED } else { label };
            (name.clone(), label.to_owned())
        })
        .collect();
    Ok(HouseholdRecord {
        household_id: row.get(id_at).unwrap_or("").to_owned(),
        revtot,
        eqadul,
        strata,
    })
}

/// Writes records under `schema`'s column names, stratification columns in
/// the order of `variables`. Numbers use the shortest representation that
/// parses back to the same `f64`.
pub fn write_survey<W: Write>(
    writer: W,
    schema: &SurveySchema,
    variables: &[String],
    records: &[HouseholdRecord],
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![
        schema.id_column.as_str(),
        schema.revtot_column.as_str(),
        schema.eqadul_column.as_str(),
    ];
    header.extend(variables.iter().map(String::as_str));
    csv.write_record(&header)?;
    for r in records {
        let mut fields = vec![r.household_id.clone(), r.revtot.to_string(), r.eqadul.to_string()];
        for v in variables {
            let label = r
                .strata
                .get(v)
                .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            fields.push(label.clone());
        }
        csv.write_record(&fields)?;
    }
    csv.flush().map_err(|source| Error::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}
