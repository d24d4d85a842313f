use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Atom, Edge, MoleculeGraph, StructureError, DEFAULT_CUTOFF};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("dataset is not a JSON array of records: {0}")]
    Json(#[from] serde_json::Error),
    #[error("record {index} ({id}): {reason}")]
    Schema {
        index: usize,
        id: String,
        reason: String,
    },
    #[error("record {index} ({id}): {source}")]
    Invalid {
        index: usize,
        id: String,
        #[source]
        source: StructureError,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    element: i64,
    pos: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: String,
    atoms: Vec<RawAtom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bandgap: Option<f64>,
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<MoleculeGraph>, DatasetError> {
    load_dataset_with_cutoff(path, DEFAULT_CUTOFF)
}

/// Loads a dataset file; records without an `edges` field get every pair
/// within `cutoff` angstroms.
pub fn load_dataset_with_cutoff(
    path: impl AsRef<Path>,
    cutoff: f64,
) -> Result<Vec<MoleculeGraph>, DatasetError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&bytes, cutoff)
}

/// Parses dataset JSON from raw bytes. Errors name the offending record.
pub fn parse_dataset(bytes: &[u8], cutoff: f64) -> Result<Vec<MoleculeGraph>, DatasetError> {
    let values: Vec<serde_json::Value> = serde_json::from_slice(bytes)?;
    values
        .into_iter()
        .enumerate()
        .map(|(index, value)| parse_record(index, value, cutoff))
        .collect()
}

fn parse_record(
    index: usize,
    value: serde_json::Value,
    cutoff: f64,
) -> Result<MoleculeGraph, DatasetError> {
    let id = value
        .get("id")
        .and_then(|v| v.as_str())
        .unwrap_or("<no id>")
        .to_string();
    let raw: RawRecord = serde_json::from_value(value).map_err(|e| DatasetError::Schema {
        index,
        id: id.clone(),
        reason: e.to_string(),
    })?;
    let invalid = |source| DatasetError::Invalid {
        index,
        id: id.clone(),
        source,
    };
    if raw.atoms.len() > super::MAX_ATOMS {
        return Err(invalid(StructureError::TooManyAtoms(raw.atoms.len())));
    }
    let atoms = raw
        .atoms
        .iter()
        .map(|a| Atom::new(a.element, a.pos))
        .collect::<Result<Vec<_>, _>>()
        .map_err(invalid)?;
    let graph = match raw.edges {
        Some(list) => {
            let edges = list
                .into_iter()
                .map(|(i, j, distance)| Edge { i, j, distance })
                .collect();
            MoleculeGraph::new(raw.id, atoms, edges, raw.bandgap)
        }
        None => MoleculeGraph::with_cutoff(raw.id, atoms, cutoff, raw.bandgap),
    };
    graph.map_err(invalid)
}

/// Serializes graphs with explicit edge lists.
pub fn to_json(graphs: &[MoleculeGraph]) -> String {
    let records: Vec<RawRecord> = graphs
        .iter()
        .map(|g| RawRecord {
            id: g.id().to_string(),
            atoms: g
                .atoms()
                .iter()
                .map(|a| RawAtom {
                    element: i64::from(a.element()),
                    pos: a.position(),
                })
                .collect(),
            edges: Some(g.edges().iter().map(|e| (e.i, e.j, e.distance)).collect()),
            bandgap: g.bandgap(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("dataset records always serialize")
}

pub fn save_dataset(graphs: &[MoleculeGraph], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    fs::write(path, to_json(graphs)).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}
