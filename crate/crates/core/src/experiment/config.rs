use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::graphhd::DEFAULT_LEVELS;
use crate::readout::{MlpConfig, SgdConfig, Task, DEFAULT_RIDGE};
use crate::reservoir::ReservoirConfig;
use crate::sspgraphd::DEFAULT_LENGTH_SCALE;
use crate::structures::DEFAULT_CUTOFF;
use crate::vsa::DEFAULT_DIM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "graphhd")]
    GraphHd,
    #[serde(rename = "ssp-graphhd")]
    SspGraphHd,
    #[serde(rename = "reservoir")]
    Reservoir,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::GraphHd => "graphhd",
            Method::SspGraphHd => "ssp-graphhd",
            Method::Reservoir => "reservoir",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graphhd" => Ok(Method::GraphHd),
            "ssp-graphhd" => Ok(Method::SspGraphHd),
            "reservoir" => Ok(Method::Reservoir),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Readout {
    Linear,
    Sgd,
    Mlp,
}

impl Readout {
    pub fn as_str(self) -> &'static str {
        match self {
            Readout::Linear => "linear",
            Readout::Sgd => "sgd",
            Readout::Mlp => "mlp",
        }
    }
}

impl fmt::Display for Readout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Readout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Readout::Linear),
            "sgd" => Ok(Readout::Sgd),
            "mlp" => Ok(Readout::Mlp),
            other => Err(format!("unknown readout '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticParams {
    pub seed: u64,
    pub n: usize,
    pub max_atoms: usize,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self {
            seed: 1,
            n: 54,
            max_atoms: 12,
        }
    }
}

/// One experiment: method, task, readout and protocol settings.
///
/// The JSON config file uses these field names; every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub method: Method,
    pub task: Task,
    /// Defaults to `sgd` for classification and `linear` for regression.
    pub readout: Option<Readout>,
    pub dim: usize,
    pub reservoir_size: usize,
    /// Defaults to 25 for the reservoir and 1 for the hypervector methods.
    pub runs: Option<usize>,
    pub base_seed: u64,
    /// Dataset file; the synthetic generator is used when absent.
    pub dataset_path: Option<PathBuf>,
    pub synthetic: SyntheticParams,
    pub output_path: Option<PathBuf>,
    pub train_fraction: f64,
    pub cutoff: f64,
    pub levels: usize,
    pub length_scale: f64,
    /// Shift every structure so its centroid sits at the origin before
    /// position encoding.
    pub center_positions: bool,
    pub ridge: f64,
    pub sgd: SgdConfig,
    /// Hidden widths default to `[10]`, or `[64, 32]` for GraphHD.
    pub mlp: Option<MlpConfig>,
    /// `size` and `seed` are replaced by `reservoir_size` and the run seed.
    pub reservoir: ReservoirConfig,
    /// Written to the results CSV; the current UTC time when absent.
    pub timestamp: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            method: Method::SspGraphHd,
            task: Task::Regression,
            readout: None,
            dim: DEFAULT_DIM,
            reservoir_size: 400,
            runs: None,
            base_seed: 1,
            dataset_path: None,
            synthetic: SyntheticParams::default(),
            output_path: None,
            train_fraction: 0.7,
            cutoff: DEFAULT_CUTOFF,
            levels: DEFAULT_LEVELS,
            length_scale: DEFAULT_LENGTH_SCALE,
            center_positions: false,
            ridge: DEFAULT_RIDGE,
            sgd: SgdConfig::default(),
            mlp: None,
            reservoir: ReservoirConfig::default(),
            timestamp: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn resolved_readout(&self) -> Readout {
        self.readout.unwrap_or(match self.task {
            Task::Classification => Readout::Sgd,
            Task::Regression => Readout::Linear,
        })
    }

    pub fn resolved_runs(&self) -> usize {
        self.runs.unwrap_or(match self.method {
            Method::Reservoir => 25,
            _ => 1,
        })
    }

    pub fn resolved_mlp(&self) -> MlpConfig {
        self.mlp.clone().unwrap_or_else(|| MlpConfig {
            hidden: match self.method {
                Method::GraphHd => vec![64, 32],
                _ => vec![10],
            },
            ..MlpConfig::default()
        })
    }

    /// Encoding dimension, or the reservoir size.
    pub fn dim_or_size(&self) -> usize {
        match self.method {
            Method::Reservoir => self.reservoir_size,
            _ => self.dim,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.resolved_runs() == 0 {
            return bad("runs must be at least 1".into());
        }
        match (self.task, self.resolved_readout()) {
            (Task::Regression, Readout::Linear | Readout::Mlp) => {}
            (Task::Classification, Readout::Sgd) => {}
            (task, readout) => return bad(format!("readout '{readout}' does not support {task}")),
        }
        if self.method != Method::Reservoir && self.dim < 8 {
            return bad(format!("dim {} is too small", self.dim));
        }
        if self.method == Method::SspGraphHd && self.dim % 2 != 0 {
            return bad("ssp-graphhd needs an even dim".into());
        }
        if !(self.cutoff > 0.0) {
            return bad("cutoff must be positive".into());
        }
        Ok(())
    }
}
