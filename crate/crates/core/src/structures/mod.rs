//! Molecular structure graphs: atoms with 3D positions, distance-weighted
//! edges and an optional bandgap label.

mod json;
mod synthetic;

pub use json::{DatasetError, load_dataset, load_dataset_with_cutoff, parse_dataset, save_dataset, to_json};
pub use synthetic::{gen_synthetic, synthetic_bandgap, SyntheticError};

use thiserror::Error;

/// Highest supported atomic number.
pub const MAX_ELEMENT: u8 = 118;
/// Node-slot budget of the spike encoding; no graph may exceed it.
pub const MAX_ATOMS: usize = 140;
/// Default neighbour cutoff in angstroms, matching the spike distance range.
pub const DEFAULT_CUTOFF: f64 = 6.0;
/// Fixed scale mapping distances to `[0, 1]` edge weights.
pub const WEIGHT_SCALE: f64 = 6.0;

const DISTANCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("element {0} outside 1..=118")]
    ElementOutOfRange(i64),
    #[error("{0} atoms exceeds the 140-atom node budget")]
    TooManyAtoms(usize),
    #[error("non-finite coordinate in atom {0}")]
    NonFinitePosition(usize),
    #[error("edge ({i}, {j}) references a missing atom (have {atoms})")]
    EdgeIndex { i: usize, j: usize, atoms: usize },
    #[error("self-loop on atom {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({i}, {j}) distance {distance} must be finite and positive")]
    BadDistance { i: usize, j: usize, distance: f64 },
    #[error("edge ({i}, {j}) distance {given} disagrees with positions ({actual})")]
    InconsistentDistance {
        i: usize,
        j: usize,
        given: f64,
        actual: f64,
    },
    #[error("bandgap {0} must be finite and non-negative")]
    BadBandgap(f64),
    #[error("graph has no edges")]
    NoEdges,
    #[error("atom index {index} out of range for {atoms} atoms")]
    AtomIndex { index: usize, atoms: usize },
    #[error("atom order is not a permutation of 0..{0}")]
    BadPermutation(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    element: u8,
    position: [f64; 3],
}

impl Atom {
    pub fn new(element: i64, position: [f64; 3]) -> Result<Self, StructureError> {
        if !(1..=i64::from(MAX_ELEMENT)).contains(&element) {
            return Err(StructureError::ElementOutOfRange(element));
        }
        Ok(Self {
            element: element as u8,
            position,
        })
    }

    pub fn element(&self) -> u8 {
        self.element
    }

    pub fn position(&self) -> [f64; 3] {
        self.position
    }

    pub fn distance_to(&self, other: &Atom) -> f64 {
        euclidean(self.position, other.position)
    }
}

/// Undirected edge, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeGraph {
    id: String,
    atoms: Vec<Atom>,
    edges: Vec<Edge>,
    bandgap: Option<f64>,
}

impl MoleculeGraph {
    /// Validates and canonicalizes the graph: edges are stored with `i < j`
    /// and sorted by `(i, j)`.
    pub fn new(
        id: impl Into<String>,
        atoms: Vec<Atom>,
        edges: Vec<Edge>,
        bandgap: Option<f64>,
    ) -> Result<Self, StructureError> {
        if atoms.len() > MAX_ATOMS {
            return Err(StructureError::TooManyAtoms(atoms.len()));
        }
        for (k, a) in atoms.iter().enumerate() {
            if a.position.iter().any(|c| !c.is_finite()) {
                return Err(StructureError::NonFinitePosition(k));
            }
        }
        if let Some(g) = bandgap {
            if !g.is_finite() || g < 0.0 {
                return Err(StructureError::BadBandgap(g));
            }
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for e in edges {
            let (i, j) = (e.i.min(e.j), e.i.max(e.j));
            if j >= atoms.len() {
                return Err(StructureError::EdgeIndex {
                    i: e.i,
                    j: e.j,
                    atoms: atoms.len(),
                });
            }
            if i == j {
                return Err(StructureError::SelfLoop(i));
            }
            if !e.distance.is_finite() || e.distance <= 0.0 {
                return Err(StructureError::BadDistance {
                    i,
                    j,
                    distance: e.distance,
                });
            }
            let actual = atoms[i].distance_to(&atoms[j]);
            if (actual - e.distance).abs() > DISTANCE_TOLERANCE {
                return Err(StructureError::InconsistentDistance {
                    i,
                    j,
                    given: e.distance,
                    actual,
                });
            }
            canonical.push(Edge {
                i,
                j,
                distance: e.distance,
            });
        }
        canonical.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = canonical.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(StructureError::DuplicateEdge(w[0].i, w[0].j));
        }
        Ok(Self {
            id: id.into(),
            atoms,
            edges: canonical,
            bandgap,
        })
    }

    /// Graph whose edges are all atom pairs within `cutoff`.
    pub fn with_cutoff(
        id: impl Into<String>,
        atoms: Vec<Atom>,
        cutoff: f64,
        bandgap: Option<f64>,
    ) -> Result<Self, StructureError> {
        let edges = build_edges(&atoms, cutoff);
        Self::new(id, atoms, edges, bandgap)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn bandgap(&self) -> Option<f64> {
        self.bandgap
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// `(neighbour, distance)` lists per atom.
    pub fn neighbours(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.atoms.len()];
        for e in &self.edges {
            adj[e.i].push((e.j, e.distance));
            adj[e.j].push((e.i, e.distance));
        }
        adj
    }

    /// Relabels atoms: atom `order[k]` of `self` becomes atom `k`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self, StructureError> {
        let n = self.atoms.len();
        let mut new_index = vec![usize::MAX; n];
        if order.len() != n {
            return Err(StructureError::BadPermutation(n));
        }
        for (k, &old) in order.iter().enumerate() {
            if old >= n || new_index[old] != usize::MAX {
                return Err(StructureError::BadPermutation(n));
            }
            new_index[old] = k;
        }
        let atoms = order.iter().map(|&old| self.atoms[old]).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                i: new_index[e.i],
                j: new_index[e.j],
                distance: e.distance,
            })
            .collect();
        Self::new(self.id.clone(), atoms, edges, self.bandgap)
    }

    /// Translated so the mean atom position is the origin.
    pub fn centered(&self) -> Self {
        let n = self.atoms.len().max(1) as f64;
        let mut c = [0.0; 3];
        for a in &self.atoms {
            for k in 0..3 {
                c[k] += a.position[k] / n;
            }
        }
        self.translated([-c[0], -c[1], -c[2]])
    }

    /// Rigid translation; edges and distances are carried over unchanged.
    pub fn translated(&self, delta: [f64; 3]) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                element: a.element,
                position: [
                    a.position[0] + delta[0],
                    a.position[1] + delta[1],
                    a.position[2] + delta[2],
                ],
            })
            .collect();
        Self {
            id: self.id.clone(),
            atoms,
            edges: self.edges.clone(),
            bandgap: self.bandgap,
        }
    }
}

pub fn euclidean(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// All unordered pairs whose distance is at most `cutoff`, each once, in
/// `(i, j)` order. Coincident atoms (distance 0) are skipped.
pub fn build_edges(atoms: &[Atom], cutoff: f64) -> Vec<Edge> {
    let mut edges = Vec::new();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let distance = atoms[i].distance_to(&atoms[j]);
            if distance > 0.0 && distance <= cutoff {
                edges.push(Edge { i, j, distance });
            }
        }
    }
    edges
}

/// Distance mapped linearly onto `[0, 1]` with the fixed 6 Å scale.
pub fn normalized_weight(distance: f64) -> f64 {
    (distance / WEIGHT_SCALE).clamp(0.0, 1.0)
}

/// Normalized weight of every edge, aligned with `g.edges()`.
pub fn normalize_weights(g: &MoleculeGraph) -> Result<Vec<f64>, StructureError> {
    if g.edges.is_empty() {
        return Err(StructureError::NoEdges);
    }
    Ok(g.edges.iter().map(|e| normalized_weight(e.distance)).collect())
}
