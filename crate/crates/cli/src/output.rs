//! CSV, summary and manifest emission.
//!
//! `checks.csv` has the fixed header
//! `multi_index,check,anchor,j,label,value,threshold,relation,verdict`; one row
//! per measurement. Numbers use Rust's shortest round-trip `{:e}` form, so
//! identical runs give identical bytes.

use std::fs;
use std::path::Path;

use serde::Serialize;

use nikishin::analysis::{CheckReport, ErrorTable, Relation};

use crate::error::{CliError, CliResult};

pub const CHECK_COLUMNS: [&str; 9] = [
    "multi_index",
    "check",
    "anchor",
    "j",
    "label",
    "value",
    "threshold",
    "relation",
    "verdict",
];

pub const TABLE_COLUMNS: [&str; 5] = ["multi_index", "j", "sup_error", "worst_point", "anchor"];

fn index_key(n: &Option<String>) -> Vec<usize> {
    n.as_deref()
        .map(|s| {
            s.trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .filter_map(|c| c.trim().parse().ok())
                .collect()
        })
        .unwrap_or_default()
}

/// Sorts by multi-index (shorter first, then lexicographic) and check name.
/// The sort is stable, so reports of the same check keep their order.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| {
        let (ka, kb) = (index_key(&a.multi_index), index_key(&b.multi_index));
        ka.len()
            .cmp(&kb.len())
            .then_with(|| ka.cmp(&kb))
            .then_with(|| a.check.cmp(&b.check))
    });
}

pub fn format_value(v: f64) -> String {
    format!("{v:e}")
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e.to_string()))
}

pub fn write_checks_csv(path: &Path, reports: &[CheckReport]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(CHECK_COLUMNS).map_err(|e| csv_error(path, e))?;
    for r in reports {
        for m in &r.measurements {
            w.write_record([
                r.multi_index.clone().unwrap_or_default(),
                r.check.clone(),
                r.anchor.clone(),
                m.j.map(|j| j.to_string()).unwrap_or_default(),
                m.label.clone(),
                format_value(m.value),
                format_value(m.threshold),
                m.relation.as_str().to_string(),
                verdict(m.passed()).to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_table_csv(path: &Path, table: &ErrorTable) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(TABLE_COLUMNS).map_err(|e| csv_error(path, e))?;
    for row in &table.rows {
        w.write_record([
            row.multi_index.clone(),
            row.j.to_string(),
            format_value(row.sup_error),
            row.worst_point.clone(),
            table.anchor.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// One line per check report.
pub fn summary(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    out.push_str(&format!("{} checks, {} failed\n", reports.len(), failed));
    out
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Inputs, seed, precision and versions of a run. The timestamp lives here
/// and nowhere else.
#[derive(Debug, Serialize)]
pub struct Manifest<'a, S: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    pub scenario_path: String,
    pub scenario: &'a S,
    pub precision: u32,
    pub seed: u64,
    pub jobs: usize,
    pub checks: Vec<String>,
    pub files: Vec<String>,
    pub passed: bool,
    pub timestamp_unix: u64,
}

pub fn write_manifest<S: Serialize>(path: &Path, manifest: &Manifest<'_, S>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(manifest).map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    write_text(path, &(text + "\n"))
}

/// A row of a previously written `checks.csv`.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub fields: Vec<String>,
    pub recomputed: bool,
}

/// Reads `checks.csv` and recomputes every verdict from value, threshold
/// and relation. Rows whose stored verdict disagrees are reported as errors.
pub fn read_checks_csv(path: &Path) -> CliResult<Vec<CheckRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header: Vec<String> = r.headers().map_err(|e| csv_error(path, e))?.iter().map(String::from).collect();
    if header != CHECK_COLUMNS {
        return Err(CliError::config(path.display().to_string(), format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let fields: Vec<String> = rec.iter().map(String::from).collect();
        let at = |what: &str| format!("{} row {}: {what}", path.display(), i + 1);
        let value: f64 = fields[5].parse().map_err(|_| CliError::config(at("value"), &fields[5]))?;
        let threshold: f64 = fields[6].parse().map_err(|_| CliError::config(at("threshold"), &fields[6]))?;
        let relation: Relation = fields[7].parse().map_err(|e| CliError::config(at("relation"), e))?;
        let ok = relation.holds(value, threshold);
        if verdict(ok) != fields[8] {
            return Err(CliError::config(at("verdict"), format!("stored {} but recomputed {}", fields[8], verdict(ok))));
        }
        rows.push(CheckRow { fields, recomputed: ok });
    }
    Ok(rows)
}
