//! Seeded synthetic dataset for desk-scale experiments.
//!
//! Each record is a small atom cloud inside a 6 Å cube. Atoms sit on
//! randomly chosen sites of a cubic lattice spanning the cube (the coarsest
//! lattice with at least `max_atoms` sites), displaced by up to ±0.1 Å per
//! coordinate. A fair coin decides whether a record is metallic:
//!
//! * metallic records draw every element from [`METALS`] and have bandgap 0;
//! * the others mix [`METALS`] and [`NONMETALS`] (at least one non-metal) and
//!   get the smooth positive bandgap of [`synthetic_bandgap`].

use thiserror::Error;

use super::{Atom, MoleculeGraph, DEFAULT_CUTOFF, MAX_ATOMS};
use crate::rng::SeededRng;

const BOX_SIDE: f64 = 6.0;
const JITTER: f64 = 0.1;

/// Metals with their Pauling electronegativity.
pub const METALS: [(u8, f64); 4] = [(11, 0.93), (12, 1.31), (13, 1.61), (29, 1.90)];
/// Non-metals with their Pauling electronegativity.
pub const NONMETALS: [(u8, f64); 4] = [(7, 3.04), (8, 3.44), (9, 3.98), (16, 2.58)];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SyntheticError {
    #[error("record count must be at least 1")]
    EmptyDataset,
    #[error("max_atoms {0} outside 2..=140")]
    MaxAtoms(usize),
}

fn electronegativity(element: u8) -> f64 {
    METALS
        .iter()
        .chain(NONMETALS.iter())
        .find(|(z, _)| *z == element)
        .map(|(_, chi)| *chi)
        .unwrap_or(2.0)
}

fn is_nonmetal(element: u8) -> bool {
    NONMETALS.iter().any(|(z, _)| *z == element)
}

/// Bandgap (eV) of a non-metallic record:
///
/// `softplus(2·f + 0.8·(χ̄ − 2) − 0.5·(b̄ − 3)) + 0.1`
///
/// with `f` the non-metal fraction, `χ̄` the mean Pauling electronegativity
/// and `b̄` the mean edge length in Å (6 Å when the graph has no edges).
pub fn synthetic_bandgap(g: &MoleculeGraph) -> f64 {
    let n = g.atom_count().max(1) as f64;
    let nonmetal = g.atoms().iter().filter(|a| is_nonmetal(a.element())).count() as f64 / n;
    let chi = g.atoms().iter().map(|a| electronegativity(a.element())).sum::<f64>() / n;
    let bond = if g.edges().is_empty() {
        BOX_SIDE
    } else {
        g.edges().iter().map(|e| e.distance).sum::<f64>() / g.edges().len() as f64
    };
    let s = 2.0 * nonmetal + 0.8 * (chi - 2.0) - 0.5 * (bond - 3.0);
    softplus(s) + 0.1
}

fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

/// Lattice points per axis: smallest `k` with `k³ ≥ max_atoms`.
fn lattice_side(max_atoms: usize) -> usize {
    (1..).find(|k| k * k * k >= max_atoms).unwrap()
}

pub fn gen_synthetic(
    rng: &mut SeededRng,
    n: usize,
    max_atoms: usize,
) -> Result<Vec<MoleculeGraph>, SyntheticError> {
    if n == 0 {
        return Err(SyntheticError::EmptyDataset);
    }
    if !(2..=MAX_ATOMS).contains(&max_atoms) {
        return Err(SyntheticError::MaxAtoms(max_atoms));
    }
    let side = lattice_side(max_atoms);
    let spacing = BOX_SIDE / side as f64;
    let mut graphs = Vec::with_capacity(n);
    for index in 0..n {
        let metallic = rng.bernoulli(0.5);
        let count = rng.range_inclusive(2, max_atoms);
        let sites = rng.sample_indices(side * side * side, count);
        let mut atoms = Vec::with_capacity(count);
        for (k, site) in sites.into_iter().enumerate() {
            let cell = [site % side, (site / side) % side, site / (side * side)];
            let mut pos = [0.0; 3];
            for (axis, p) in pos.iter_mut().enumerate() {
                *p = (cell[axis] as f64 + 0.5) * spacing + JITTER * (2.0 * rng.uniform() - 1.0);
            }
            let pick_nonmetal = !metallic && (k == 0 || rng.bernoulli(0.5));
            let pool = if pick_nonmetal { &NONMETALS } else { &METALS };
            let element = pool[rng.range_inclusive(0, pool.len() - 1)].0;
            atoms.push(Atom::new(i64::from(element), pos).expect("pool elements are valid"));
        }
        let id = format!("synthetic-{index:04}");
        let mut g = MoleculeGraph::with_cutoff(id.clone(), atoms, DEFAULT_CUTOFF, None)
            .expect("generated graphs satisfy the graph invariants");
        let gap = if metallic { 0.0 } else { synthetic_bandgap(&g) };
        g = MoleculeGraph::new(id, g.atoms().to_vec(), g.edges().to_vec(), Some(gap))
            .expect("generated graphs satisfy the graph invariants");
        graphs.push(g);
    }
    Ok(graphs)
}
