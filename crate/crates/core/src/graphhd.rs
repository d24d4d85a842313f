//! GraphHD encoding of molecular graphs in the MAP algebra.
//!
//! Every element gets a random bipolar vector `H[Z]` and edges share one
//! vector `V`. The node memory of atom `i` is
//! `NM_i = Σ_j permute(V, shift(w_ij)) * H[Z_j]` over its neighbours, with
//! `shift(w) = round(w · (levels − 1))` and `w` the normalized edge weight.
//! The graph vector is `G = ½ Σ_i H[Z_i] * NM_i`. Everything up to the final
//! halving is integer arithmetic, so encodings are exactly invariant to
//! atom order.

use thiserror::Error;

use crate::rng::{streams, SeededRng};
use crate::structures::{normalized_weight, MoleculeGraph, MAX_ELEMENT};
use crate::vsa::{DenseHypervector, MapHypervector, VsaError};

/// Real-valued whole-graph encoding fed to the readouts.
pub type GraphHypervector = DenseHypervector;

pub const DEFAULT_LEVELS: usize = 25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error(transparent)]
    Vsa(#[from] VsaError),
    #[error("graph has no atoms")]
    EmptyGraph,
    #[error("atom index {index} out of range for {atoms} atoms")]
    AtomIndex { index: usize, atoms: usize },
    #[error("{0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementCodebook {
    elements: Vec<MapHypervector>,
    edge: MapHypervector,
    levels: usize,
    seed: u64,
}

impl ElementCodebook {
    /// Samples 118 element vectors and the edge vector from `(seed, dim)`.
    /// Repeats are resampled so all 119 vectors are distinct, which needs
    /// `dim ≥ 7`.
    pub fn new(seed: u64, dim: usize, levels: usize) -> Result<Self, EncodeError> {
        if dim < 7 {
            return Err(EncodeError::Vsa(VsaError::InvalidDimension {
                dim,
                reason: "119 distinct bipolar vectors need at least 7 components",
            }));
        }
        if levels < 2 {
            return Err(EncodeError::InvalidParameter(format!(
                "levels must be at least 2, got {levels}"
            )));
        }
        let mut rng = SeededRng::with_stream(seed, streams::MAP_CODEBOOK);
        let mut seen = std::collections::HashSet::new();
        let mut vectors = Vec::with_capacity(usize::from(MAX_ELEMENT) + 1);
        while vectors.len() <= usize::from(MAX_ELEMENT) {
            let v = MapHypervector::sample(&mut rng, dim)?;
            if seen.insert(v.clone()) {
                vectors.push(v);
            }
        }
        let edge = vectors.pop().expect("119 vectors sampled");
        Ok(Self {
            elements: vectors,
            edge,
            levels,
            seed,
        })
    }

    /// Vector of atomic number `z` (1-based).
    pub fn element(&self, z: u8) -> &MapHypervector {
        &self.elements[usize::from(z) - 1]
    }

    pub fn edge(&self) -> &MapHypervector {
        &self.edge
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.edge.dim()
    }

    /// Permutation amount for a normalized weight in `[0, 1]`.
    pub fn shift(&self, weight: f64) -> i64 {
        (weight * (self.levels - 1) as f64).round() as i64
    }
}

/// Node memory of atom `index`; zero for isolated atoms.
pub fn node_memory(
    g: &MoleculeGraph,
    index: usize,
    cb: &ElementCodebook,
) -> Result<MapHypervector, EncodeError> {
    if index >= g.atom_count() {
        return Err(EncodeError::AtomIndex {
            index,
            atoms: g.atom_count(),
        });
    }
    let neighbours = g.neighbours();
    node_memory_from(g, &neighbours[index], cb)
}

fn node_memory_from(
    g: &MoleculeGraph,
    neighbours: &[(usize, f64)],
    cb: &ElementCodebook,
) -> Result<MapHypervector, EncodeError> {
    let mut nm = MapHypervector::zeros(cb.dim());
    for &(j, distance) in neighbours {
        let shifted = cb.edge().permute(cb.shift(normalized_weight(distance)));
        nm.accumulate_bound(&shifted, cb.element(g.atoms()[j].element()))?;
    }
    Ok(nm)
}

/// Integer bundle `Σ_i H[Z_i] * NM_i`, before halving.
pub fn graph_bundle(g: &MoleculeGraph, cb: &ElementCodebook) -> Result<MapHypervector, EncodeError> {
    if g.atom_count() == 0 {
        return Err(EncodeError::EmptyGraph);
    }
    let neighbours = g.neighbours();
    let mut acc = MapHypervector::zeros(cb.dim());
    for (i, atom) in g.atoms().iter().enumerate() {
        let nm = node_memory_from(g, &neighbours[i], cb)?;
        acc.accumulate_bound(cb.element(atom.element()), &nm)?;
    }
    Ok(acc)
}

pub fn encode_graphhd(g: &MoleculeGraph, cb: &ElementCodebook) -> Result<GraphHypervector, EncodeError> {
    let bundle = graph_bundle(g, cb)?;
    Ok(DenseHypervector::from_values(
        bundle.values().iter().map(|&v| 0.5 * f64::from(v)).collect(),
    ))
}
