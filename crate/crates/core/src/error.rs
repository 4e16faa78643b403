use std::path::PathBuf;

/// Errors raised by indicator evaluation, decomposition, survey loading and
/// simulation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty population: at least one income is required")]
    EmptyPopulation,

    #[error("invalid income {value} at index {index}: incomes must be finite and non-negative")]
    InvalidIncome { index: usize, value: f64 },

    #[error("invalid poverty line {0}: must be finite and strictly positive")]
    InvalidPovertyLine(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("degenerate normalizer: B(Q, N) = 0 with Q = {q_poor}")]
    DegenerateNormalizer { q_poor: usize },

    #[error("no poor households: the mean poverty gap is undefined when Q = 0")]
    NoPoorHouseholds,

    #[error("indicator {0} has no representation in the generic index form")]
    NotGpiForm(String),

    #[error("unknown indicator {0:?}")]
    UnknownIndicator(String),

    #[error("record {index} has an empty stratum label")]
    EmptyLabel { index: usize },

    #[error("unknown stratum {label:?} at record {index}")]
    UnknownStratum { index: usize, label: String },

    #[error("stratum {0:?} has no poor households")]
    GroupWithoutPoor(String),

    #[error("duplicate stratum label {0:?}")]
    DuplicateStratum(String),

    #[error("incompatible reports: {0}")]
    IncompatibleReports(String),

    #[error("sub-sample of {requested} requested from stratum {label:?} holding only {available}")]
    OversizedSubsample {
        label: String,
        requested: usize,
        available: usize,
    },

    #[error("missing column {0:?}")]
    MissingColumn(String),

    #[error("parse error at row {row}, column {column:?}: {message}")]
    ParseError {
        row: usize,
        column: String,
        message: String,
    },

    #[error("non-positive EQADUL at row {0}")]
    NonPositiveEqadul(usize),

    #[error("unknown stratification variable {0:?}")]
    UnknownVariable(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Whether the error comes from configuration or parameters rather than
    /// from the data itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidPovertyLine(_)
                | Error::InvalidParameter { .. }
                | Error::UnknownIndicator(_)
                | Error::UnknownVariable(_)
                | Error::NotGpiForm(_)
                | Error::Config(_)
                | Error::OversizedSubsample { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
