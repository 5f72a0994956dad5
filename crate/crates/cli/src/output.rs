//! JSON and CSV rendering of a run.
//!
//! Floats are written in their shortest round-trip form by both encoders,
//! and every collection is emitted in a fixed order, so identical runs give
//! byte-identical files.

use std::path::{Path, PathBuf};

use anyhow::{Context as _, Result};
use serde::Serialize;

use crate::suites::SuiteOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub instance: String,
    pub seed: u64,
    pub cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    pub pass: bool,
    pub suites: Vec<SuiteOutcome>,
}

/// One line of the unified CSV report. A report with per-block records
/// contributes one row per record; otherwise a single summary row carrying
/// the worst slack and its location.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub suite: String,
    pub property: String,
    pub instance: String,
    pub n: Option<i64>,
    pub m: Option<usize>,
    pub block: Option<usize>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct CoefficientLine<'a> {
    instance: &'a str,
    pair: &'a str,
    m: Option<usize>,
    kind: &'a str,
    block: usize,
    value: f64,
}

impl RunReport {
    pub fn rows(&self) -> Vec<Row> {
        let mut rows = Vec::new();
        for outcome in &self.suites {
            let suite = outcome.suite.name().to_string();
            if let Some(err) = &outcome.error {
                rows.push(Row {
                    suite: suite.clone(),
                    property: format!("error: {err}"),
                    instance: self.instance.clone(),
                    n: None,
                    m: None,
                    block: None,
                    lhs: None,
                    rhs: None,
                    slack: -1.0,
                    pass: false,
                });
            }
            for r in &outcome.reports {
                if r.records.is_empty() {
                    let loc = r.location.unwrap_or_default();
                    rows.push(Row {
                        suite: suite.clone(),
                        property: r.property.clone(),
                        instance: self.instance.clone(),
                        n: loc.n,
                        m: loc.m,
                        block: loc.block,
                        lhs: None,
                        rhs: None,
                        slack: r.worst_slack,
                        pass: r.pass,
                    });
                }
                for rec in &r.records {
                    rows.push(Row {
                        suite: suite.clone(),
                        property: r.property.clone(),
                        instance: self.instance.clone(),
                        n: rec.n,
                        m: rec.m,
                        block: Some(rec.block),
                        lhs: Some(rec.lhs),
                        rhs: Some(rec.rhs),
                        slack: rec.slack,
                        pass: rec.pass,
                    });
                }
            }
        }
        rows
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run report serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.rows() {
            w.serialize(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// The mixing coefficient side table, if any suite produced one.
    pub fn coefficients_csv(&self) -> Result<Option<String>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut any = false;
        for outcome in &self.suites {
            for c in &outcome.coefficients {
                any = true;
                w.serialize(CoefficientLine {
                    instance: &self.instance,
                    pair: &c.pair,
                    m: c.m,
                    kind: c.kind.label(),
                    block: c.block,
                    value: c.value,
                })?;
            }
        }
        if !any {
            return Ok(None);
        }
        Ok(Some(String::from_utf8(w.into_inner()?)?))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

/// `<dir>/<stem>.coefficients.csv` next to `out`.
pub fn coefficients_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.coefficients.csv"))
}

/// Writes the report to `out` (and, for CSV, the coefficient side table
/// next to it), or returns the rendered text for stdout.
pub fn emit(report: &RunReport, format: Format, out: Option<&Path>) -> Result<Option<String>> {
    let text = report.render(format)?;
    let Some(out) = out else {
        return Ok(Some(text));
    };
    std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    if format == Format::Csv {
        if let Some(side) = report.coefficients_csv()? {
            let path = coefficients_path(out);
            std::fs::write(&path, side).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(None)
}
