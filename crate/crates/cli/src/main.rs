//! `gpi`: poverty indicators, decomposability-gap tables, convergence studies
//! and bootstrap intervals from the command line.
//!
//! Exit codes: 0 on success, 2 for configuration or usage errors, 3 for data
//! errors.

mod commands;
mod report;
mod text;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "gpi", version, about = "Poverty indicators and their decomposability gap")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Global value of each configured indicator.
    Compute {
        /// Household survey CSV.
        dataset: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Recomposed value, global value and decomposability gap per stratification.
    Decompose {
        dataset: PathBuf,
        /// Stratification variable (a column of the dataset).
        #[arg(long, required_unless_present = "all_variables", conflicts_with = "all_variables")]
        variable: Option<String>,
        /// Run every variable listed under `stratification` in the config.
        #[arg(long)]
        all_variables: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Convergence study of the sampled gap on lognormal populations. The
    /// study file is passed with `--config`; without it the reference model
    /// is used.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Percentile bootstrap interval of the gap, resampling within strata.
    Bootstrap {
        dataset: PathBuf,
        #[arg(long)]
        variable: String,
        #[arg(long, default_value_t = 1000)]
        replicates: usize,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed of stochastic commands.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Text rendering locale; machine formats always use `.` decimals.
    #[arg(long, value_enum, default_value_t = Locale::En)]
    pub locale: Locale,
    /// Indicators to report, overriding the config (`sen`, `shorrocks`,
    /// `fgt:ALPHA`, `ray:ALPHA`).
    #[arg(long = "indicator")]
    pub indicators: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum Locale {
    En,
    Fr,
}

/// A failure with its exit code.
pub enum Failure {
    Config(String),
    Data(String),
}

impl From<gpi_core::Error> for Failure {
    fn from(e: gpi_core::Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute { dataset, common } => commands::compute(&dataset, &common),
        Command::Decompose {
            dataset,
            variable,
            all_variables,
            common,
        } => commands::decompose(&dataset, variable.as_deref(), all_variables, &common),
        Command::Simulate { common } => commands::simulate(&common),
        Command::Bootstrap {
            dataset,
            variable,
            replicates,
            level,
            common,
        } => commands::bootstrap(&dataset, &variable, replicates, level, &common),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(message)) => {
            eprintln!("gpi: configuration error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Data(message)) => {
            eprintln!("gpi: data error: {message}");
            ExitCode::from(3)
        }
    }
}
