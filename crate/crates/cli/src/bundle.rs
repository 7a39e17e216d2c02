use std::path::{Path, PathBuf};

use macroreal::mrconds::{ConditionReport, MrClass};
use macroreal::scan::{Extremum, SweepResult};
use serde::{Deserialize, Serialize};

use crate::config::Command;
use crate::jsonfmt;
use crate::CliError;

pub const CSV_HEADER: [&str; 6] = ["scenario", "id", "family", "lhs", "margin", "satisfied"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub seed: u64,
    pub tolerance: f64,
    /// Seconds since the Unix epoch when the run finished.
    pub created_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReports {
    pub scenario: String,
    pub reports: Vec<ConditionReport>,
}

/// `Re D(n₁, n₂ | n₁', n₂)`, outcomes one-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceEntry {
    pub n1: usize,
    pub n1p: usize,
    pub n2: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceSummary {
    pub times: [usize; 2],
    pub independent: usize,
    /// Rank of the evaluated NSIT set as a map from independent interference terms.
    pub rank: usize,
    pub complete: bool,
    pub entries: Vec<InterferenceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub index: usize,
    pub seed: u64,
    pub suite_holds: bool,
    pub suite_margin: f64,
    pub variants_hold: bool,
    pub variant_margin: f64,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_feasible: Option<bool>,
    pub robust_mismatch: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub count: usize,
    pub feasible: usize,
    pub robust_mismatches: usize,
    pub band_mismatches: usize,
    pub robust_variant_mismatches: usize,
    pub oracle_disagreements: usize,
    pub entries: Vec<AuditRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub metadata: Metadata,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ScenarioReports>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<MrClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interference: Vec<InterferenceSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremum: Option<Extremum>,
}

/// Output format: `table` writes only the CSV exports, `full` adds the JSON report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Full,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output(format!("{}: {e}", path.display()))
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

impl ReportBundle {
    pub fn all_reports(&self) -> impl Iterator<Item = &ConditionReport> {
        self.conditions.iter().flat_map(|s| s.reports.iter())
    }

    pub fn condition_rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for s in &self.conditions {
            for r in &s.reports {
                rows.push(vec![
                    s.scenario.clone(),
                    r.id.to_string(),
                    r.family.to_string(),
                    jsonfmt::float(r.lhs),
                    jsonfmt::float(r.margin),
                    r.satisfied.to_string(),
                ]);
            }
        }
        rows
    }

    /// Write the exports into `dir`; returns the paths written.
    pub fn emit(&self, dir: &Path, format: Format) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let mut written = Vec::new();
        let header: Vec<String> = CSV_HEADER.iter().map(|s| s.to_string()).collect();
        let path = dir.join("report.csv");
        write_csv(&path, &header, &self.condition_rows())?;
        written.push(path);

        if let Some(sweep) = &self.sweep {
            let mut header: Vec<String> = sweep
                .params
                .iter()
                .map(|p| serde_json::to_value(p.target).expect("enum").as_str().unwrap_or("").to_string())
                .collect();
            header.push("worst".into());
            let mut families: Vec<_> = sweep
                .points
                .iter()
                .flat_map(|p| p.families.iter().map(|f| f.family))
                .collect();
            families.sort();
            families.dedup();
            header.extend(families.iter().map(|f| f.to_string()));
            let rows: Vec<Vec<String>> = sweep
                .points
                .iter()
                .map(|p| {
                    let mut row: Vec<String> = p.coords.iter().map(|&c| jsonfmt::float(c)).collect();
                    row.push(p.worst.map(jsonfmt::float).unwrap_or_default());
                    for f in &families {
                        row.push(
                            p.families
                                .iter()
                                .find(|m| m.family == *f)
                                .map(|m| jsonfmt::float(m.margin))
                                .unwrap_or_default(),
                        );
                    }
                    row
                })
                .collect();
            let path = dir.join("sweep.csv");
            write_csv(&path, &header, &rows)?;
            written.push(path);
        }

        if let Some(audit) = &self.audit {
            let header: Vec<String> = [
                "index",
                "seed",
                "suite_holds",
                "suite_margin",
                "variants_hold",
                "variant_margin",
                "feasible",
                "vertex_feasible",
                "robust_mismatch",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<String>> = audit
                .entries
                .iter()
                .map(|e| {
                    vec![
                        e.index.to_string(),
                        e.seed.to_string(),
                        e.suite_holds.to_string(),
                        jsonfmt::float(e.suite_margin),
                        e.variants_hold.to_string(),
                        jsonfmt::float(e.variant_margin),
                        e.feasible.to_string(),
                        e.vertex_feasible.map(|v| v.to_string()).unwrap_or_default(),
                        e.robust_mismatch.to_string(),
                    ]
                })
                .collect();
            let path = dir.join("audit.csv");
            write_csv(&path, &header, &rows)?;
            written.push(path);
        }

        if format == Format::Full {
            let path = dir.join("report.json");
            let text = jsonfmt::to_string(self).map_err(|e| io_err(&path, e))?;
            std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}
