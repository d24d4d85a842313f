//! Hyperdimensional and spiking encodings of molecular graphs with trainable
//! readouts for bandgap prediction.

pub mod experiment;
pub mod graphhd;
pub mod readout;
pub mod reservoir;
pub mod rng;
pub mod spike;
pub mod sspgraphd;
pub mod structures;
pub mod vsa;

pub use graphhd::{EncodeError, GraphHypervector};
pub use structures::{Atom, Edge, MoleculeGraph};
