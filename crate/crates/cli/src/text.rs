//! Plain-text rendering: aligned tables, 4-decimal numbers, English or French
//! labels.

use crate::Locale;

pub struct Labels {
    pub recomposed: &'static str,
    pub global: &'static str,
    pub gap: &'static str,
    pub dataset: &'static str,
    pub poverty_line: &'static str,
    pub households: &'static str,
    pub poor: &'static str,
    pub skipped: &'static str,
    pub stratification: &'static str,
    pub indicator: &'static str,
    pub value: &'static str,
    pub group: &'static str,
    pub weight: &'static str,
    pub absolute_gap: &'static str,
    pub relative_gap: &'static str,
    pub estimate: &'static str,
    pub lower: &'static str,
    pub upper: &'static str,
    pub bootstrap_mean: &'static str,
    pub bootstrap: &'static str,
    pub replicates: &'static str,
    pub level: &'static str,
    pub seed: &'static str,
    pub study: &'static str,
    pub strata: &'static str,
    pub replications: &'static str,
}

const EN: Labels = Labels {
    recomposed: "Recomposed",
    global: "Global",
    gap: "Gap",
    dataset: "Dataset",
    poverty_line: "Poverty line Z",
    households: "Households N",
    poor: "poor Q",
    skipped: "Skipped rows",
    stratification: "Stratification",
    indicator: "Indicator",
    value: "Value",
    group: "Group",
    weight: "Weight",
    absolute_gap: "absolute gap",
    relative_gap: "relative gap",
    estimate: "Estimate",
    lower: "Lower",
    upper: "Upper",
    bootstrap_mean: "Bootstrap mean",
    bootstrap: "Bootstrap of the gap by",
    replicates: "replicates",
    level: "level",
    seed: "seed",
    study: "Convergence study",
    strata: "strata",
    replications: "replications",
};

const FR: Labels = Labels {
    recomposed: "Mesure décomposée",
    global: "Mesure globale",
    gap: "Défaut de décomposabilité",
    dataset: "Données",
    poverty_line: "Seuil de pauvreté Z",
    households: "Ménages N",
    poor: "pauvres Q",
    skipped: "Lignes ignorées",
    stratification: "Décomposition",
    indicator: "Indicateur",
    value: "Valeur",
    group: "Groupe",
    weight: "Poids",
    absolute_gap: "défaut absolu",
    relative_gap: "défaut relatif",
    estimate: "Estimation",
    lower: "Borne inf.",
    upper: "Borne sup.",
    bootstrap_mean: "Moyenne bootstrap",
    bootstrap: "Bootstrap du défaut par",
    replicates: "réplications",
    level: "niveau",
    seed: "graine",
    study: "Étude de convergence",
    strata: "strates",
    replications: "réplications",
};

pub fn labels(locale: Locale) -> &'static Labels {
    match locale {
        Locale::En => &EN,
        Locale::Fr => &FR,
    }
}

fn localize(s: String, locale: Locale) -> String {
    match locale {
        Locale::En => s,
        Locale::Fr => s.replace('.', ","),
    }
}

/// Fixed-point with `decimals` places; a value that rounds to zero prints
/// without a sign.
pub fn fixed(x: f64, decimals: usize, locale: Locale) -> String {
    let s = format!("{x:.decimals$}");
    let s = match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_owned(),
        _ => s,
    };
    localize(s, locale)
}

/// The report style: four decimals.
pub fn num(x: f64, locale: Locale) -> String {
    fixed(x, 4, locale)
}

pub fn percent(x: f64, locale: Locale) -> String {
    format!("{}%", fixed(100.0 * x, 2, locale))
}

pub fn scientific(x: f64, locale: Locale) -> String {
    localize(format!("{x:.3e}"), locale)
}

/// Right-aligned columns except the first; two spaces between columns.
pub fn table(header: &[String], rows: &[Vec<String>], indent: &str) -> String {
    let columns = header.len();
    let width = |i: usize| {
        rows.iter()
            .map(|r| r[i].chars().count())
            .chain(std::iter::once(header[i].chars().count()))
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..columns).map(width).collect();
    let line = |cells: &[String]| {
        let mut out = String::from(indent);
        for (i, cell) in cells.iter().enumerate() {
            let pad = widths[i] - cell.chars().count();
            if i == 0 {
                out.push_str(cell);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str("  ");
                out.push_str(&" ".repeat(pad));
                out.push_str(cell);
            }
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
        out
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}
