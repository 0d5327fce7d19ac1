//! Report model and emission: canonical JSON, CSV, optional SVG.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::scenario::Scenario;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub scenario: Scenario,
    pub tasks: Vec<TaskResult>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskResult {
    pub task: String,
    /// Index of the metric spec the entry refers to, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<usize>,
    /// Dimension-valued results (per degree where applicable).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    /// Independent oracle values, when an oracle applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<usize>>,
    /// Oracle agreement; absent when no oracle applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_match: Option<bool>,
    /// Scalar diagnostics (residuals, constants, condition numbers).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub metrics_out: Vec<(String, f64)>,
    /// Spectra for plotting (pencil eigenvalues).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
    /// Refinement sequence rows (level, resolution, ratio).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine_rows: Option<Vec<RefineRow>>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefineRow {
    pub level: usize,
    pub n: usize,
    pub r: f64,
    pub slope: f64,
}

impl TaskResult {
    pub fn new(task: &str) -> Self {
        Self {
            task: task.to_string(),
            metric: None,
            dims: None,
            oracle: None,
            oracle_match: None,
            metrics_out: Vec::new(),
            spectrum: None,
            refine_rows: None,
            passed: true,
            timing_ms: None,
            note: None,
        }
    }
}

/// Canonical JSON: sorted keys, LF endings, trailing newline.
pub fn to_canonical_json(report: &Report) -> String {
    let value: Value = serde_json::to_value(report).expect("report serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("value prints");
    text.push('\n');
    text
}

/// Flat CSV: one row per scalar or dimension claim.
pub fn to_csv(report: &Report) -> String {
    let mut out = String::from("task,metric,key,value\n");
    for t in &report.tasks {
        let metric = t
            .metric
            .map(|m| m.to_string())
            .unwrap_or_else(|| "".into());
        if let Some(dims) = &t.dims {
            for (k, d) in dims.iter().enumerate() {
                out.push_str(&format!("{},{},dim_{},{}\n", t.task, metric, k, d));
            }
        }
        if let (Some(oracle), Some(m)) = (&t.oracle, t.oracle_match) {
            for (k, d) in oracle.iter().enumerate() {
                out.push_str(&format!("{},{},oracle_{},{}\n", t.task, metric, k, d));
            }
            out.push_str(&format!("{},{},oracle_match,{}\n", t.task, metric, m));
        }
        for (key, v) in &t.metrics_out {
            out.push_str(&format!("{},{},{},{:.17e}\n", t.task, metric, key, v));
        }
        out.push_str(&format!("{},{},passed,{}\n", t.task, metric, t.passed));
    }
    out
}

/// Refinement CSV with the level/N/r/slope schema.
pub fn refine_csv(report: &Report) -> Option<String> {
    let rows: Vec<&RefineRow> = report
        .tasks
        .iter()
        .filter_map(|t| t.refine_rows.as_ref())
        .flatten()
        .collect();
    if rows.is_empty() {
        return None;
    }
    let mut out = String::from("level,N,r,slope\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.17e},{:.17e}\n",
            row.level, row.n, row.r, row.slope
        ));
    }
    Some(out)
}

/// Write report artifacts into a directory. Returns the list of files
/// written; SVG plots are emitted only when plottable data exists, with a
/// notice otherwise.
pub fn emit_report(
    report: &Report,
    dir: &Path,
    want_svg: bool,
) -> std::io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json_path = dir.join("report.json");
    fs::write(&json_path, to_canonical_json(report))?;
    written.push(json_path.display().to_string());
    let csv_path = dir.join("report.csv");
    fs::write(&csv_path, to_csv(report))?;
    written.push(csv_path.display().to_string());
    if let Some(csv) = refine_csv(report) {
        let path = dir.join("refine.csv");
        fs::write(&path, csv)?;
        written.push(path.display().to_string());
    }
    if want_svg {
        let mut plotted = false;
        let spectra: Vec<(usize, &Vec<f64>)> = report
            .tasks
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.spectrum.as_ref().map(|s| (i, s)))
            .collect();
        if !spectra.is_empty() {
            let path = dir.join("spectrum.svg");
            fs::write(&path, crate::svg::spectrum_scatter(&spectra))?;
            written.push(path.display().to_string());
            plotted = true;
        }
        let rows: Vec<RefineRow> = report
            .tasks
            .iter()
            .filter_map(|t| t.refine_rows.as_ref())
            .flatten()
            .copied()
            .collect();
        if !rows.is_empty() {
            let path = dir.join("refine.svg");
            fs::write(&path, crate::svg::refine_loglog(&rows))?;
            written.push(path.display().to_string());
            plotted = true;
        }
        if !plotted {
            eprintln!("note: no plottable data in this report; SVG omitted");
        }
    }
    Ok(written)
}
