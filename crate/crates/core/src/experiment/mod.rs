//! End-to-end experiment driver: dataset, encoding, split, readout, metrics
//! and results files.

mod config;
mod results;

pub use config::{ExperimentConfig, Method, Readout, SyntheticParams};
pub use results::{
    append_results, emit_results, format_table, parse_results, read_results, ResultsRow, CSV_HEADER,
};

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graphhd::{encode_graphhd, ElementCodebook, EncodeError};
use crate::readout::{
    evaluate, split_indices, train_linear_regressor, train_mlp, train_sgd_classifier, FeatureMatrix,
    Model, ReadoutError, Standardizer, Task,
};
use crate::reservoir::{Reservoir, ReservoirError};
use crate::rng::{streams, SeededRng};
use crate::spike::{encode_graph, SpikeError, SpikeFrame};
use crate::sspgraphd::SspEncoder;
use crate::structures::{gen_synthetic, load_dataset_with_cutoff, DatasetError, MoleculeGraph, SyntheticError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Synthetic(#[from] SyntheticError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Spike(#[from] SpikeError),
    #[error(transparent)]
    Reservoir(#[from] ReservoirError),
    #[error(transparent)]
    Readout(#[from] ReadoutError),
    #[error("record '{0}' has no bandgap label")]
    MissingLabel(String),
    #[error("results file: {0}")]
    Results(String),
}

/// Metric of one seeded run next to the constant-predictor baseline on the
/// same split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunOutcome {
    pub seed: u64,
    pub metric: f64,
    pub baseline: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub row: ResultsRow,
    pub runs: Vec<RunOutcome>,
}

impl ExperimentOutcome {
    pub fn baseline_mean(&self) -> f64 {
        mean_std(&self.runs.iter().map(|r| r.baseline).collect::<Vec<_>>()).0
    }
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn synthetic_dataset(params: &SyntheticParams) -> Result<Vec<MoleculeGraph>, SyntheticError> {
    let mut rng = SeededRng::with_stream(params.seed, streams::SYNTHETIC);
    gen_synthetic(&mut rng, params.n, params.max_atoms)
}

pub fn load_graphs(cfg: &ExperimentConfig) -> Result<Vec<MoleculeGraph>, ExperimentError> {
    Ok(match &cfg.dataset_path {
        Some(path) => load_dataset_with_cutoff(path, cfg.cutoff)?,
        None => synthetic_dataset(&cfg.synthetic)?,
    })
}

/// Feature rows for every graph: the graph hypervector, or the reservoir
/// firing rates. `seed` drives codebooks and reservoir wiring.
pub fn encode_features(
    graphs: &[MoleculeGraph],
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<Vec<f64>>, ExperimentError> {
    match cfg.method {
        Method::GraphHd => {
            let cb = ElementCodebook::new(seed, cfg.dim, cfg.levels)?;
            graphs
                .par_iter()
                .map(|g| Ok(encode_graphhd(g, &cb)?.into_values()))
                .collect()
        }
        Method::SspGraphHd => {
            let enc = SspEncoder::new(seed, cfg.dim, cfg.length_scale)?;
            graphs
                .par_iter()
                .map(|g| {
                    let encoded = if cfg.center_positions {
                        enc.encode(&g.centered())?
                    } else {
                        enc.encode(g)?
                    };
                    Ok(encoded.into_values())
                })
                .collect()
        }
        Method::Reservoir => {
            let mut rc = cfg.reservoir.clone();
            rc.size = cfg.reservoir_size;
            rc.seed = seed;
            let reservoir = Reservoir::build(&rc)?;
            graphs
                .par_iter()
                .map(|g| {
                    let mut frames = encode_graph(g)?;
                    if frames.is_empty() {
                        frames.push(SpikeFrame::zero());
                    }
                    Ok(reservoir.run(&frames)?.rates)
                })
                .collect()
        }
    }
}

fn labels(graphs: &[MoleculeGraph], task: Task) -> Result<Vec<f64>, ExperimentError> {
    graphs
        .iter()
        .map(|g| {
            let gap = g
                .bandgap()
                .ok_or_else(|| ExperimentError::MissingLabel(g.id().to_string()))?;
            Ok(match task {
                Task::Regression => gap,
                Task::Classification => {
                    if gap > 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                }
            })
        })
        .collect()
}

fn baseline(train: &FeatureMatrix, task: Task) -> Model {
    let y = train.labels();
    match task {
        Task::Regression => Model::Constant(y.iter().sum::<f64>() / y.len() as f64),
        Task::Classification => {
            let ones = y.iter().filter(|&&v| v == 1.0).count();
            Model::Constant(if 2 * ones > y.len() { 1.0 } else { 0.0 })
        }
    }
}

/// One seeded run on precomputed features.
pub fn evaluate_features(
    data: &FeatureMatrix,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<RunOutcome, ExperimentError> {
    let mut split_rng = SeededRng::with_stream(seed, streams::SPLIT);
    let (train_idx, test_idx) = split_indices(data.len(), cfg.train_fraction, &mut split_rng)?;
    let (train, test) = (data.subset(&train_idx), data.subset(&test_idx));
    let scaler = Standardizer::fit(&train)?;
    let (train, test) = (scaler.transform(&train), scaler.transform(&test));
    let model = match cfg.resolved_readout() {
        Readout::Linear => Model::Regressor(train_linear_regressor(&train, cfg.ridge)?),
        Readout::Sgd => {
            let mut rng = SeededRng::with_stream(seed, streams::READOUT);
            Model::Classifier(train_sgd_classifier(&train, &cfg.sgd, &mut rng)?)
        }
        Readout::Mlp => {
            let mut mlp = cfg.resolved_mlp();
            mlp.seed = seed;
            Model::Mlp(train_mlp(&train, &mlp)?)
        }
    };
    Ok(RunOutcome {
        seed,
        metric: evaluate(&model, &test, cfg.task)?.value,
        baseline: evaluate(&baseline(&train, cfg.task), &test, cfg.task)?.value,
    })
}

fn timestamp(cfg: &ExperimentConfig) -> String {
    cfg.timestamp.clone().unwrap_or_else(|| {
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
    })
}

/// Runs `cfg` on `graphs`: run `r` uses seed `base_seed + r`.
pub fn run_on_graphs(
    graphs: &[MoleculeGraph],
    cfg: &ExperimentConfig,
) -> Result<ExperimentOutcome, ExperimentError> {
    cfg.validate()?;
    let targets = labels(graphs, cfg.task)?;
    let runs = cfg.resolved_runs();
    let outcomes = (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let seed = cfg.base_seed.wrapping_add(r);
            let rows = encode_features(graphs, cfg, seed)?;
            let data = FeatureMatrix::new(rows, targets.clone())?;
            evaluate_features(&data, cfg, seed)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (mean, std) = mean_std(&outcomes.iter().map(|o| o.metric).collect::<Vec<_>>());
    let row = ResultsRow {
        method: cfg.method.to_string(),
        task: cfg.task.to_string(),
        readout: cfg.resolved_readout().to_string(),
        dim_or_size: cfg.dim_or_size(),
        runs,
        base_seed: cfg.base_seed,
        metric: cfg.task.metric_name().to_string(),
        mean,
        std,
        timestamp: timestamp(cfg),
    };
    Ok(ExperimentOutcome { row, runs: outcomes })
}

/// Loads the dataset, runs the experiment and, when `output_path` is set,
/// appends the results row and its metadata record.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome, ExperimentError> {
    cfg.validate()?;
    let graphs = load_graphs(cfg)?;
    let outcome = run_on_graphs(&graphs, cfg)?;
    if let Some(path) = &cfg.output_path {
        append_results(std::slice::from_ref(&outcome.row), path)?;
        append_metadata(cfg, &outcome, path)?;
    }
    Ok(outcome)
}

/// `<results>.meta.jsonl`, one JSON line per results row.
pub fn metadata_path(results: &Path) -> PathBuf {
    let mut name = results.as_os_str().to_owned();
    name.push(".meta.jsonl");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct MetadataRecord<'a> {
    timestamp: &'a str,
    method: Method,
    task: Task,
    readout: Readout,
    dim: usize,
    levels: usize,
    length_scale: f64,
    reservoir_size: usize,
    seeds: Vec<u64>,
    config: &'a ExperimentConfig,
    runs: &'a [RunOutcome],
}

fn append_metadata(
    cfg: &ExperimentConfig,
    outcome: &ExperimentOutcome,
    results: &Path,
) -> Result<(), ExperimentError> {
    let path = metadata_path(results);
    let record = MetadataRecord {
        timestamp: &outcome.row.timestamp,
        method: cfg.method,
        task: cfg.task,
        readout: cfg.resolved_readout(),
        dim: cfg.dim,
        levels: cfg.levels,
        length_scale: cfg.length_scale,
        reservoir_size: cfg.reservoir_size,
        seeds: outcome.runs.iter().map(|r| r.seed).collect(),
        config: cfg,
        runs: &outcome.runs,
    };
    let line = serde_json::to_string(&record).map_err(|e| ExperimentError::Results(e.to_string()))?;
    let io = |e: std::io::Error| ExperimentError::Results(format!("{}: {e}", path.display()));
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(io)?;
    writeln!(file, "{line}").map_err(io)
}
