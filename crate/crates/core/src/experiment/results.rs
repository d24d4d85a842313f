//! Results CSV and the plain-text summary table.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExperimentError;

pub const CSV_HEADER: &str = "method,task,readout,dim_or_size,runs,base_seed,metric,mean,std,timestamp";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsRow {
    pub method: String,
    pub task: String,
    pub readout: String,
    pub dim_or_size: usize,
    pub runs: usize,
    pub base_seed: u64,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub timestamp: String,
}

fn csv_error(path: &Path, e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Results(format!("{}: {e}", path.display()))
}

/// Writes `rows` to a fresh CSV file with the header line.
pub fn emit_results(rows: &[ResultsRow], path: impl AsRef<Path>) -> Result<(), ExperimentError> {
    let path = path.as_ref();
    if rows.is_empty() {
        return Err(ExperimentError::Results("no rows to write".into()));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| csv_error(path, e))
}

/// Appends to an existing results file, creating it (with header) if needed.
pub fn append_results(rows: &[ResultsRow], path: impl AsRef<Path>) -> Result<(), ExperimentError> {
    let path = path.as_ref();
    let exists = path.metadata().map(|m| m.len() > 0).unwrap_or(false);
    if !exists {
        return emit_results(rows, path);
    }
    read_results(path)?;
    let file = OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| csv_error(path, e))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| csv_error(path, e))
}

pub fn parse_results(bytes: &[u8]) -> Result<Vec<ResultsRow>, ExperimentError> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r
        .headers()
        .map_err(|e| ExperimentError::Results(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(ExperimentError::Results(format!("unexpected header '{header}'")));
    }
    r.deserialize()
        .collect::<Result<Vec<ResultsRow>, _>>()
        .map_err(|e| ExperimentError::Results(e.to_string()))
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultsRow>, ExperimentError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| csv_error(path, e))?;
    parse_results(&bytes).map_err(|e| csv_error(path, e))
}

fn method_label(row: &ResultsRow) -> String {
    match row.method.as_str() {
        "reservoir" => format!("Reservoir-{}", row.dim_or_size),
        "graphhd" => "GraphHD".to_string(),
        "ssp-graphhd" => "SSP-GraphHD".to_string(),
        other => other.to_string(),
    }
}

fn cell(row: &ResultsRow) -> String {
    if row.runs > 1 {
        format!("{:.4} ± {:.4}", row.mean, row.std)
    } else {
        format!("{:.4}", row.mean)
    }
}

/// Method × metric table. When a method has both MLP and linear regression
/// rows the MAE cell reads `mlp (linear)`.
pub fn format_table(rows: &[ResultsRow]) -> String {
    #[derive(Default)]
    struct Cells {
        mae_mlp: Option<String>,
        mae_linear: Option<String>,
        accuracy: Option<String>,
    }
    let mut order: Vec<String> = Vec::new();
    let mut table: BTreeMap<String, Cells> = BTreeMap::new();
    for row in rows {
        let label = method_label(row);
        if !table.contains_key(&label) {
            order.push(label.clone());
        }
        let cells = table.entry(label).or_default();
        match (row.metric.as_str(), row.readout.as_str()) {
            ("mae", "mlp") => cells.mae_mlp = Some(cell(row)),
            ("mae", _) => cells.mae_linear = Some(cell(row)),
            ("accuracy", _) => cells.accuracy = Some(cell(row)),
            _ => {}
        }
    }
    let mut lines = vec![
        format!("{:<18} | {:<32} | {:<20}", "Method", "MAE", "Class. Acc."),
        format!("{}-+-{}-+-{}", "-".repeat(18), "-".repeat(32), "-".repeat(20)),
    ];
    for label in order {
        let c = &table[&label];
        let mae = match (&c.mae_mlp, &c.mae_linear) {
            (Some(m), Some(l)) => format!("{m} ({l})"),
            (Some(m), None) => m.clone(),
            (None, Some(l)) => l.clone(),
            (None, None) => "--".to_string(),
        };
        let acc = c.accuracy.clone().unwrap_or_else(|| "--".to_string());
        lines.push(format!("{label:<18} | {mae:<32} | {acc:<20}"));
    }
    lines.join("\n")
}
