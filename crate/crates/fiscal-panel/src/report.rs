//! Deterministic table and figure-data rendering.
//!
//! All emitted numbers follow one rounding rule: round-half-even at the
//! stated digit count (4 significant digits for statistics and
//! coefficients, 4 decimals for p-values), with trailing zeros trimmed
//! from significant-digit output. Figure data and trajectories print at
//! full precision so re-ingestion reproduces values bit-exactly.

use std::fmt::Write as _;

use crate::dcce::MeanGroupResult;
use crate::diagnostics::TestResult;
use crate::error::Result;
use crate::panel::{GroupSplit, PanelDataset, VariableSummary};

/// Round-half-even formatting at `digits` significant digits, trailing
/// zeros trimmed.
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits > 0);
    if x.is_nan() {
        return "nan".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - magnitude;
    if decimals >= 0 {
        // The standard formatter rounds half-to-even at the cut digit.
        let s = format!("{x:.*}", decimals as usize);
        trim_trailing_zeros(&s)
    } else {
        let scale = 10f64.powi(-decimals);
        let rounded = (x / scale).round_ties_even() * scale;
        format!("{rounded:.0}")
    }
}

fn trim_trailing_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

/// Stars at the 10/5/1 percent levels.
pub fn significance_stars(p: Option<f64>) -> &'static str {
    match p {
        Some(p) if p < 0.01 => "***",
        Some(p) if p < 0.05 => "**",
        Some(p) if p < 0.10 => "*",
        _ => "",
    }
}

/// `statistic (p-value)` cell, `--` standing in for an undefined p-value.
pub fn format_stat_cell(statistic: f64, p_value: Option<f64>) -> String {
    match p_value {
        Some(p) => format!("{} ({:.4})", format_significant(statistic, 4), p),
        None => format!("{} (--)", format_significant(statistic, 4)),
    }
}

/// One regression column of the coefficient table.
#[derive(Debug, Clone)]
pub struct RegressionColumn {
    pub label: String,
    pub result: MeanGroupResult,
}

/// Row selection and labels for the coefficient table.
#[derive(Debug, Clone)]
pub struct TableLayout {
    /// `(coefficient name, display label)` in table order.
    pub rows: Vec<(String, String)>,
}

impl TableLayout {
    pub fn new(rows: &[(&str, &str)]) -> Self {
        TableLayout {
            rows: rows
                .iter()
                .map(|(n, l)| (n.to_string(), l.to_string()))
                .collect(),
        }
    }
}

/// Render the coefficient table: one row per coefficient with significance
/// stars, standard errors in parentheses beneath, `--` where a column's
/// specification omits the coefficient.
pub fn render_regression_table(columns: &[RegressionColumn], layout: &TableLayout) -> String {
    let mut out = String::new();
    out.push_str("coefficient");
    for c in columns {
        let _ = write!(out, "\t{}", c.label);
    }
    out.push('\n');
    for (name, label) in &layout.rows {
        let _ = write!(out, "{label}");
        for c in columns {
            match c.result.coefficient(name) {
                Some(v) => {
                    let stars = significance_stars(c.result.p_value(name));
                    let _ = write!(out, "\t{}{stars}", format_significant(v, 4));
                }
                None => out.push_str("\t--"),
            }
        }
        out.push('\n');
        for c in columns {
            match c.result.standard_error(name) {
                Some(se) => {
                    let _ = write!(out, "\t({})", format_significant(se, 4));
                }
                None => out.push_str("\t--"),
            }
        }
        out.push('\n');
    }
    out
}

/// One row of the summary-and-diagnostics table.
#[derive(Debug, Clone)]
pub struct DiagnosticsRow {
    pub label: String,
    pub summary: VariableSummary,
    pub cd: TestResult,
    pub cd_plus: TestResult,
    /// Fisher-type combination of the unit-level statistics.
    pub cadf_combined: (f64, Option<f64>),
    pub cips: TestResult,
}

/// Render the summary statistics and diagnostic battery, one variable per
/// row, statistics carrying their p-values in parentheses.
pub fn render_diagnostics_table(rows: &[DiagnosticsRow]) -> String {
    let mut out = String::new();
    out.push_str("variable\tmean\tmedian\tsd\tmin\tmax\tcd\tcd_plus\tcadf\tcips\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.label,
            format_significant(r.summary.mean, 4),
            format_significant(r.summary.median, 4),
            format_significant(r.summary.sd, 4),
            format_significant(r.summary.min, 4),
            format_significant(r.summary.max, 4),
            format_stat_cell(r.cd.statistic, r.cd.p_value),
            format_stat_cell(r.cd_plus.statistic, r.cd_plus.p_value),
            format_stat_cell(r.cadf_combined.0, r.cadf_combined.1),
            format_stat_cell(r.cips.statistic, r.cips.p_value),
        );
    }
    out
}

/// Per-year group means in long format: `year, group, variable, mean`,
/// full-precision values.
pub fn render_figure_data(
    panel: &PanelDataset,
    groups: &[GroupSplit],
    variables: &[(String, String)],
) -> Result<String> {
    let mut out = String::new();
    out.push_str("year\tgroup\tvariable\tmean\n");
    for group in groups {
        for (var, label) in variables {
            let series = panel.cross_sectional_average(var, group)?;
            for (year, value) in panel.years().iter().zip(&series) {
                let _ = writeln!(out, "{year}\t{}\t{label}\t{value}", group.label);
            }
        }
    }
    Ok(out)
}
