//! JSON and CSV emission of run reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EntryDetail, RunReport, ScenarioError};

/// Header row of every CSV table.
pub const CSV_HEADER: &str = "check_id,instance_id,t_or_s,lhs,rhs,margin";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?}, expected json or csv")),
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// One row per grid sample and per agreement entry. The row id is the entry
/// id followed by `.part` when the sample belongs to a named part.
/// Eigenvalue and error entries carry no margin and are left out.
pub fn to_csv(report: &RunReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for e in &report.entries {
        match &e.detail {
            EntryDetail::Comparison { report: r } => {
                for s in &r.samples {
                    let id = match &s.part {
                        Some(p) => format!("{}.{p}", e.check_id),
                        None => e.check_id.clone(),
                    };
                    let _ = writeln!(out, "{id},{},{:?},{:?},{:?},{:?}", e.instance_id, s.at, s.lhs, s.rhs, s.margin);
                }
            }
            EntryDetail::Agreement { d, shooting, finite_difference, .. } => {
                let margin = e.worst_margin.unwrap_or(f64::NAN);
                let _ = writeln!(out, "{},{},{d:?},{shooting:?},{finite_difference:?},{margin:?}", e.check_id, e.instance_id);
            }
            EntryDetail::Eigen { .. } | EntryDetail::Error { .. } => {}
        }
    }
    out
}

/// Write `report.json` and, for [`OutputFormat::Csv`], also `margins.csv`
/// into `dir`. Returns the written paths.
pub fn emit_tables(report: &RunReport, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>, ScenarioError> {
    let io = |path: &Path, source| ScenarioError::Io { path: path.display().to_string(), source };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    let json = dir.join("report.json");
    std::fs::write(&json, to_json(report)).map_err(|e| io(&json, e))?;
    written.push(json);
    if format == OutputFormat::Csv {
        let csv = dir.join("margins.csv");
        std::fs::write(&csv, to_csv(report)).map_err(|e| io(&csv, e))?;
        written.push(csv);
    }
    Ok(written)
}
