use std::fs;
use std::path::Path;

use gpi_core::simulation::{
    bootstrap_gap_ci, convergence_study, ConvergenceStudy, LognormalSpec, PovertyLine, StudyDesign,
};
use gpi_core::{decompose as decompose_gap, load_survey, order_and_count, AnalysisConfig, GpiSpec, LoadedSurvey};
use serde::Deserialize;

use crate::report::{Body, DecompositionTable, GapEntry, IndicatorValue, Metadata, Report, SCHEMA_VERSION};
use crate::text::{self, labels, num, percent, scientific};
use crate::{Common, Failure, Format, Locale};

type Outcome = Result<(), Failure>;

fn load_config(common: &Common) -> Result<AnalysisConfig, Failure> {
    let config = match &common.config {
        Some(path) => AnalysisConfig::load(path).map_err(|e| Failure::Config(e.to_string()))?,
        None => AnalysisConfig::default(),
    };
    Ok(config)
}

fn indicators(common: &Common, configured: &[GpiSpec]) -> Result<Vec<GpiSpec>, Failure> {
    if common.indicators.is_empty() {
        return Ok(configured.to_vec());
    }
    common
        .indicators
        .iter()
        .map(|s| s.parse::<GpiSpec>().map_err(Failure::from))
        .collect()
}

fn load_data(path: &Path, config: &AnalysisConfig) -> Result<LoadedSurvey, Failure> {
    let survey = load_survey(path, &config.schema(), config.load_mode)?;
    if survey.records.is_empty() {
        return Err(gpi_core::Error::EmptyPopulation.into());
    }
    Ok(survey)
}

fn data_metadata(path: &Path, common: &Common, survey: &LoadedSurvey, z: f64) -> Result<Metadata, Failure> {
    let sample = order_and_count(&survey.incomes(), z)?;
    Ok(Metadata {
        dataset: Some(path.display().to_string()),
        config: common.config.as_ref().map(|p| p.display().to_string()),
        poverty_line: Some(z),
        seed: None,
        households: Some(sample.n_total()),
        poor: Some(sample.q_poor()),
        rows_read: Some(survey.rows_read),
        skipped_rows: survey.skipped.clone(),
    })
}

fn emit(common: &Common, content: &str) -> Outcome {
    match &common.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory csv");
    for row in rows {
        writer.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

/// Shared text header of dataset-based reports.
fn text_preamble(m: &Metadata, locale: Locale) -> String {
    let l = labels(locale);
    let mut out = format!("{}: {}\n", l.dataset, m.dataset.as_deref().unwrap_or("-"));
    out += &format!("{} = {}\n", l.poverty_line, num(m.poverty_line.unwrap_or(f64::NAN), locale));
    out += &format!(
        "{} = {}, {} = {}\n",
        l.households,
        m.households.unwrap_or(0),
        l.poor,
        m.poor.unwrap_or(0)
    );
    if !m.skipped_rows.is_empty() {
        let rows: Vec<String> = m.skipped_rows.iter().map(|s| s.row.to_string()).collect();
        out += &format!("{}: {}\n", l.skipped, rows.join(", "));
    }
    out
}

pub fn compute(dataset: &Path, common: &Common) -> Outcome {
    let config = load_config(common)?;
    let specs = indicators(common, &config.indicators)?;
    let survey = load_data(dataset, &config)?;
    let z = config.poverty_line_annual();
    let sample = order_and_count(&survey.incomes(), z)?;
    let values = specs
        .iter()
        .map(|spec| {
            Ok(IndicatorValue {
                indicator: spec.label(),
                value: spec.evaluate(&sample)?,
            })
        })
        .collect::<Result<Vec<_>, gpi_core::Error>>()?;
    let metadata = data_metadata(dataset, common, &survey, z)?;

    let content = match common.format {
        Format::Json => Report {
            schema_version: SCHEMA_VERSION,
            command: "compute",
            metadata,
            body: Body::Compute { indicators: values },
        }
        .to_json(),
        Format::Csv => csv_text(
            &["indicator", "value"],
            values.iter().map(|v| vec![v.indicator.clone(), v.value.to_string()]),
        ),
        Format::Text => {
            let l = labels(common.locale);
            let rows: Vec<Vec<String>> = values
                .iter()
                .map(|v| vec![v.indicator.clone(), num(v.value, common.locale)])
                .collect();
            text_preamble(&metadata, common.locale)
                + "\n"
                + &text::table(&[l.indicator.into(), l.value.into()], &rows, "")
        }
    };
    emit(common, &content)
}

pub fn decompose(dataset: &Path, variable: Option<&str>, all_variables: bool, common: &Common) -> Outcome {
    let config = load_config(common)?;
    let specs = indicators(common, &config.indicators)?;
    let variables: Vec<String> = if all_variables {
        if config.stratification.is_empty() {
            return Err(Failure::Config(
                "--all-variables needs a `stratification` list in the config".into(),
            ));
        }
        config.stratification.clone()
    } else {
        vec![variable.expect("clap enforces --variable").to_owned()]
    };
    let survey = load_data(dataset, &config)?;
    let z = config.poverty_line_annual();
    let mut tables = Vec::with_capacity(variables.len());
    for name in &variables {
        let strat = survey.stratify_by(name)?;
        let entries = specs
            .iter()
            .map(|spec| decompose_gap(&strat, z, spec).map(GapEntry::from))
            .collect::<Result<Vec<_>, _>>()?;
        tables.push(DecompositionTable {
            variable: name.clone(),
            categories: strat.len(),
            entries,
        });
    }
    let metadata = data_metadata(dataset, common, &survey, z)?;

    let content = match common.format {
        Format::Json => Report {
            schema_version: SCHEMA_VERSION,
            command: "decompose",
            metadata,
            body: Body::Decompose { tables },
        }
        .to_json(),
        Format::Csv => {
            let mut rows = Vec::new();
            for t in &tables {
                for e in &t.entries {
                    let mut row = |measure: String, value: f64| {
                        rows.push(vec![t.variable.clone(), e.indicator.clone(), measure, value.to_string()])
                    };
                    row("recomposed".into(), e.recomposed);
                    row("global".into(), e.global);
                    row("gap".into(), e.gap);
                    for g in &e.groups {
                        row(format!("group:{}", g.label), g.value);
                    }
                }
            }
            csv_text(&["variable", "indicator", "measure", "value"], rows)
        }
        Format::Text => {
            let mut out = text_preamble(&metadata, common.locale);
            for t in &tables {
                out += &decomposition_text(t, common.locale);
            }
            out
        }
    };
    emit(common, &content)
}

fn decomposition_text(t: &DecompositionTable, locale: Locale) -> String {
    let l = labels(locale);
    let mut header = vec![String::new()];
    header.extend(t.entries.iter().map(|e| e.indicator.clone()));
    let row = |label: &str, pick: fn(&GapEntry) -> f64| {
        let mut r = vec![label.to_owned()];
        r.extend(t.entries.iter().map(|e| num(pick(e), locale)));
        r
    };
    let rows = [
        row(l.recomposed, |e| e.recomposed),
        row(l.global, |e| e.global),
        row(l.gap, |e| e.gap),
    ];
    let mut out = format!("\n{}: {} (K = {})\n", l.stratification, t.variable, t.categories);
    out += &text::table(&header, &rows, "");
    for e in &t.entries {
        let relative = e.relative_gap.map_or_else(|| "n/a".to_owned(), |r| percent(r, locale));
        out += &format!(
            "\n{}: {} {}, {} {}\n",
            e.indicator,
            l.absolute_gap,
            num(e.gap.abs(), locale),
            l.relative_gap,
            relative
        );
        let groups: Vec<Vec<String>> = e
            .groups
            .iter()
            .map(|g| {
                vec![
                    g.label.clone(),
                    g.size.to_string(),
                    g.poor.to_string(),
                    num(g.weight, locale),
                    num(g.value, locale),
                ]
            })
            .collect();
        out += &text::table(
            &[l.group.into(), "N_i".into(), "Q_i".into(), l.weight.into(), l.value.into()],
            &groups,
            "  ",
        );
    }
    out
}

pub fn bootstrap(dataset: &Path, variable: &str, replicates: usize, level: f64, common: &Common) -> Outcome {
    let config = load_config(common)?;
    let specs = indicators(common, &config.indicators)?;
    let survey = load_data(dataset, &config)?;
    let z = config.poverty_line_annual();
    let seed = common.seed.unwrap_or(0);
    let strat = survey.stratify_by(variable)?;
    let intervals = specs
        .iter()
        .map(|spec| bootstrap_gap_ci(&strat, z, spec, replicates, level, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut metadata = data_metadata(dataset, common, &survey, z)?;
    metadata.seed = Some(seed);

    let content = match common.format {
        Format::Json => Report {
            schema_version: SCHEMA_VERSION,
            command: "bootstrap",
            metadata,
            body: Body::Bootstrap {
                variable: variable.to_owned(),
                categories: strat.len(),
                intervals,
            },
        }
        .to_json(),
        Format::Csv => csv_text(
            &["variable", "indicator", "estimate", "lower", "upper", "bootstrap_mean", "level", "replicates", "seed"],
            intervals.iter().map(|i| {
                vec![
                    variable.to_owned(),
                    i.indicator.clone(),
                    i.estimate.to_string(),
                    i.lower.to_string(),
                    i.upper.to_string(),
                    i.bootstrap_mean.to_string(),
                    i.level.to_string(),
                    i.replicates.to_string(),
                    i.seed.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let (l, loc) = (labels(common.locale), common.locale);
            let mut out = text_preamble(&metadata, loc);
            out += &format!(
                "\n{} {} (K = {}): {} {}, {} {}, {} {}\n",
                l.bootstrap,
                variable,
                strat.len(),
                replicates,
                l.replicates,
                l.level,
                percent(level, loc),
                l.seed,
                seed
            );
            let rows: Vec<Vec<String>> = intervals
                .iter()
                .map(|i| {
                    vec![
                        i.indicator.clone(),
                        num(i.estimate, loc),
                        num(i.lower, loc),
                        num(i.upper, loc),
                        num(i.bootstrap_mean, loc),
                    ]
                })
                .collect();
            out + &text::table(
                &[
                    l.indicator.into(),
                    l.estimate.into(),
                    l.lower.into(),
                    l.upper.into(),
                    l.bootstrap_mean.into(),
                ],
                &rows,
                "",
            )
        }
    };
    emit(common, &content)
}

/// Population model of a study file.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ModelSection {
    /// Ten strata, N = 3278, m = -12, σ = 1, rescaled to the default line.
    Reference,
    Homogeneous {
        strata: usize,
        total: usize,
        location: f64,
        scale: f64,
    },
    Custom(LognormalSpec),
}

/// Study file passed to `simulate --config`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StudyFile {
    #[serde(default = "reference_model")]
    model: ModelSection,
    #[serde(default = "default_grid")]
    grid: Vec<usize>,
    #[serde(default = "default_replications")]
    replications: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    poverty_line: PovertyLine,
    #[serde(default = "default_indicators")]
    indicators: Vec<GpiSpec>,
}

fn reference_model() -> ModelSection {
    ModelSection::Reference
}

fn default_grid() -> Vec<usize> {
    vec![500, 3278, 20000]
}

fn default_replications() -> usize {
    100
}

fn default_indicators() -> Vec<GpiSpec> {
    vec![GpiSpec::Sen, GpiSpec::Shorrocks]
}

fn read_study_file(common: &Common) -> Result<StudyFile, Failure> {
    let text = match &common.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    toml::from_str(&text).map_err(|e| Failure::Config(e.to_string()))
}

pub fn simulate(common: &Common) -> Outcome {
    let file = read_study_file(common)?;
    let model = match file.model {
        ModelSection::Reference => LognormalSpec::reference_model(),
        ModelSection::Homogeneous {
            strata,
            total,
            location,
            scale,
        } => LognormalSpec::homogeneous(strata, total, location, scale),
        ModelSection::Custom(spec) => spec,
    };
    let design = StudyDesign {
        grid: file.grid,
        replications: file.replications,
        seed: common.seed.unwrap_or(file.seed),
        poverty_line: file.poverty_line,
        indicators: indicators(common, &file.indicators)?,
    };
    let study = convergence_study(&model, &design)?;

    let content = match common.format {
        Format::Json => Report {
            schema_version: SCHEMA_VERSION,
            command: "simulate",
            metadata: Metadata {
                config: common.config.as_ref().map(|p| p.display().to_string()),
                seed: Some(design.seed),
                ..Metadata::default()
            },
            body: Body::Simulate { study },
        }
        .to_json(),
        Format::Csv => study.to_csv(),
        Format::Text => study_text(&study, common.locale),
    };
    emit(common, &content)
}

fn study_text(study: &ConvergenceStudy, locale: Locale) -> String {
    let l = labels(locale);
    let line = match study.poverty_line {
        PovertyLine::Absolute { value } => format!("Z = {}", num(value, locale)),
        PovertyLine::EmpiricalQuantile { p } => format!("Z = empirical quantile {}", num(p, locale)),
        PovertyLine::ModelQuantile { p } => format!("Z = model quantile {}", num(p, locale)),
    };
    let mut out = format!(
        "{}: {} {}, R = {} {}, {} {}, {}\n\n",
        l.study,
        study.model.strata.len(),
        l.strata,
        study.replications,
        l.replications,
        l.seed,
        study.seed,
        line
    );
    let rows: Vec<Vec<String>> = study
        .summaries
        .iter()
        .map(|s| {
            vec![
                s.indicator.clone(),
                s.n.to_string(),
                scientific(s.mean, locale),
                scientific(s.std_error, locale),
                scientific(s.median_abs, locale),
                scientific(s.q90_abs, locale),
                scientific(s.max_abs, locale),
            ]
        })
        .collect();
    out += &text::table(
        &[
            l.indicator.into(),
            "n".into(),
            "mean dd_n".into(),
            "s.e.".into(),
            "median |dd_n|".into(),
            "q90 |dd_n|".into(),
            "max |dd_n|".into(),
        ],
        &rows,
        "",
    );
    out
}
