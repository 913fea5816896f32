//! CSV and JSON rendering of experiment and table reports.
//!
//! Both renderings are pure functions of the report, so identical reports
//! give byte-identical output.

use serde::Serialize;

use super::tables::TableReport;
use super::trials::{ExperimentReport, Stat};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "alpha",
    "beta_over_alpha",
    "r_mode",
    "stat",
    "empirical",
    "stderr",
    "theory",
    "pass",
];

#[derive(Serialize)]
struct CsvRow {
    alpha: f64,
    beta_over_alpha: f64,
    r_mode: String,
    stat: &'static str,
    empirical: Option<f64>,
    stderr: Option<f64>,
    theory: Option<f64>,
    pass: Option<bool>,
}

fn write_rows(rows: impl IntoIterator<Item = CsvRow>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Numerical(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Numerical(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
}

/// One line per statistic; `pass` is left empty (no tolerance applies).
pub fn experiment_csv(report: &ExperimentReport) -> Result<String> {
    let reg = &report.regime;
    write_rows(Stat::ALL.iter().filter_map(|&stat| {
        let emp = report.stat(stat)?;
        Some(CsvRow {
            alpha: reg.alpha,
            beta_over_alpha: reg.beta_w / reg.alpha,
            r_mode: report.r_mode.to_string(),
            stat: stat.name(),
            empirical: Some(emp.mean),
            stderr: Some(emp.stderr),
            theory: report.theory.as_ref().map(|p| stat.theory_value(p)),
            pass: None,
        })
    }))
}

/// One line per table cell.
pub fn table_csv(report: &TableReport) -> Result<String> {
    write_rows(report.cells().map(|(row, cell)| CsvRow {
        alpha: row.alpha,
        beta_over_alpha: row.beta_over_alpha,
        r_mode: row.r_mode.to_string(),
        stat: cell.stat.name(),
        empirical: cell.empirical,
        stderr: cell.stderr,
        theory: cell.theory,
        pass: cell.pass,
    }))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(format!("json: {e}")))
}
