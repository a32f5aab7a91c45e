//! Result emission: per-round ledgers as CSV, summaries as JSON, plot-ready
//! (round, average total error, bound) triples, and an optional dependency-
//! free SVG line chart.

use std::fs;
use std::path::Path;

use oofl_core::types::Bounds;
use oofl_core::RunLedger;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, LearnerKind};
use crate::error::HarnessError;
use crate::experiments::SummaryTable;

/// One CSV row of a run ledger. Solution-side fields are empty when the run
/// had no known truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub round: usize,
    pub objective_error: f64,
    pub solution_error: Option<f64>,
    pub total_error: Option<f64>,
    pub avg_objective_error: f64,
    pub avg_solution_error: Option<f64>,
    pub avg_total_error: Option<f64>,
    pub mismatch: bool,
}

pub fn ledger_rows(ledger: &RunLedger) -> Vec<LedgerRow> {
    ledger
        .records
        .iter()
        .enumerate()
        .map(|(i, record)| LedgerRow {
            round: record.round,
            objective_error: record.objective_error,
            solution_error: record.solution_error,
            total_error: record.total_error,
            avg_objective_error: ledger.avg_objective[i],
            avg_solution_error: ledger.avg_solution.as_ref().map(|v| v[i]),
            avg_total_error: ledger.avg_total.as_ref().map(|v| v[i]),
            mismatch: record.mismatch,
        })
        .collect()
}

pub fn write_ledger_csv(ledger: &RunLedger, path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path).map_err(HarnessError::Csv)?;
    for row in ledger_rows(ledger) {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    Ok(())
}

pub fn read_ledger_csv(path: &Path) -> Result<Vec<LedgerRow>, HarnessError> {
    let mut reader = csv::Reader::from_path(path).map_err(HarnessError::Csv)?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        rows.push(record?);
    }
    Ok(rows)
}

/// The summary file: configuration echo plus the aggregated table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub table: SummaryTable,
}

pub fn write_summary_json(doc: &SummaryDocument, path: &Path) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(doc)?;
    fs::write(path, text).map_err(|e| HarnessError::io(path.display().to_string(), e))
}

pub fn read_summary_json(path: &Path) -> Result<SummaryDocument, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&text)?)
}

/// The learner's average-error guarantee after `t` rounds, when one exists.
pub fn theorem_bound_at(learner: LearnerKind, bounds: &Bounds, t: usize) -> Option<f64> {
    let scaled = Bounds { t, ..*bounds };
    match learner {
        LearnerKind::Mwu => Some(scaled.mwu_bound()),
        LearnerKind::OgdFixed | LearnerKind::OgdDynamic => Some(scaled.ogd_bound()),
        LearnerKind::LpFtl => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub round: usize,
    pub avg_total_error: f64,
    pub bound_value: Option<f64>,
}

/// Plot data for one ledger: its average total error against the active
/// theorem bound per round.
pub fn plot_rows(ledger: &RunLedger, learner: LearnerKind, bounds: &Bounds) -> Result<Vec<PlotRow>, HarnessError> {
    let Some(avg_total) = &ledger.avg_total else {
        return Err(HarnessError::Config("plot data needs a ledger with a known truth".into()));
    };
    Ok(avg_total
        .iter()
        .enumerate()
        .map(|(i, &v)| PlotRow {
            round: i + 1,
            avg_total_error: v,
            bound_value: theorem_bound_at(learner, bounds, i + 1),
        })
        .collect())
}

pub fn write_plot_csv(rows: &[PlotRow], path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path).map_err(HarnessError::Csv)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    Ok(())
}

/// Minimal SVG line chart of (x, y) series; no plotting dependency.
pub fn write_svg(series: &[(&str, Vec<(f64, f64)>)], title: &str, path: &Path) -> Result<(), HarnessError> {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const MARGIN: f64 = 45.0;
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for (_, points) in series {
        for &(x, y) in points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    if !min_x.is_finite() || min_x == max_x {
        max_x = min_x + 1.0;
    }
    if !min_y.is_finite() || min_y == max_y {
        max_y = min_y + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - min_x) / (max_x - min_x) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - min_y) / (max_y - min_y) * (H - 2.0 * MARGIN);
    let colors = ["#1f6fb2", "#c43d3d", "#3d9950", "#8950c4"];
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    ));
    for (i, (name, points)) in series.iter().enumerate() {
        if points.is_empty() {
            continue;
        }
        let color = colors[i % colors.len()];
        let path_points: Vec<String> =
            points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            path_points.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">{name}</text>\n",
            W - MARGIN + 4.0 - 100.0,
            MARGIN + 14.0 * (i as f64 + 1.0)
        ));
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg).map_err(|e| HarnessError::io(path.display().to_string(), e))
}
