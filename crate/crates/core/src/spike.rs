//! Edge-to-spike-frame encoding for the reservoir pipeline.
//!
//! A frame is a 165-slot binary vector: slots `0..140` mark the two atoms of
//! an edge, slots `140..165` one quarter-angstrom distance bin covering
//! `0, 0.25, ..., 6.0` Å.

use std::fmt;

use thiserror::Error;

use crate::structures::{Edge, MoleculeGraph};

pub const NODE_SLOTS: usize = 140;
pub const DISTANCE_BINS: usize = 25;
pub const FRAME_LEN: usize = NODE_SLOTS + DISTANCE_BINS;
pub const BIN_WIDTH: f64 = 0.25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpikeError {
    #[error("atom index {0} does not fit the 140 node slots")]
    NodeIndex(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SpikeFrame {
    bits: [u64; 3],
}

impl SpikeFrame {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Frame with exactly the given slots set. Panics on slots `>= 165`.
    pub fn from_slots(slots: &[usize]) -> Self {
        let mut f = Self::zero();
        for &s in slots {
            f.set(s);
        }
        f
    }

    pub fn set(&mut self, slot: usize) {
        assert!(slot < FRAME_LEN, "slot {slot} outside frame");
        self.bits[slot / 64] |= 1 << (slot % 64);
    }

    pub fn is_set(&self, slot: usize) -> bool {
        slot < FRAME_LEN && self.bits[slot / 64] & (1 << (slot % 64)) != 0
    }

    pub fn popcount(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    /// Set slots in ascending order.
    pub fn active_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..FRAME_LEN).filter(move |&s| self.is_set(s))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..FRAME_LEN).map(|s| u8::from(self.is_set(s))).collect()
    }
}

impl fmt::Display for SpikeFrame {
    /// 165 characters of `0`/`1`, slot 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..FRAME_LEN {
            f.write_str(if self.is_set(s) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SpikeFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.active_slots()).finish()
    }
}

/// Frame slot of a distance: nearest quarter angstrom (ties away from zero),
/// clamped to the 25 bins.
pub fn distance_slot(distance: f64) -> usize {
    let bin = (distance.max(0.0) / BIN_WIDTH).round();
    NODE_SLOTS + (bin as usize).min(DISTANCE_BINS - 1)
}

pub fn encode_edge(edge: &Edge) -> Result<SpikeFrame, SpikeError> {
    for idx in [edge.i, edge.j] {
        if idx >= NODE_SLOTS {
            return Err(SpikeError::NodeIndex(idx));
        }
    }
    Ok(SpikeFrame::from_slots(&[edge.i, edge.j, distance_slot(edge.distance)]))
}

/// One frame per edge, in ascending `(i, j)` order.
pub fn encode_graph(g: &MoleculeGraph) -> Result<Vec<SpikeFrame>, SpikeError> {
    let mut edges = g.edges().to_vec();
    edges.sort_by_key(|e| (e.i, e.j));
    edges.iter().map(encode_edge).collect()
}
