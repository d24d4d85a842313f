//! SSP-GraphHD: spatial semantic pointers over 3D atom positions bound to
//! neighbourhood-aware element vectors, in the unitary (circular
//! convolution) algebra.
//!
//! * position code `S(p) = X^(x/ℓ) ⊗ Y^(y/ℓ) ⊗ Z^(z/ℓ)`
//! * object vector `OBJ_i = H[Z_i] ⊗ normalize(Σ_j H[Z_j])` over neighbours
//!   `j`, or just `H[Z_i]` for an isolated atom
//! * graph vector `G = ½ Σ_i OBJ_i ⊗ S(p_i)`
//!
//! Sums run in a canonical atom order (element, then coordinates), so the
//! floating-point result does not depend on how atoms are numbered.

use std::cmp::Ordering;

use crate::graphhd::{EncodeError, GraphHypervector};
use crate::rng::{streams, SeededRng};
use crate::structures::{Atom, MoleculeGraph, MAX_ELEMENT};
use crate::vsa::{fft, DenseHypervector, UnitaryHypervector, VsaError};

pub const DEFAULT_LENGTH_SCALE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AxisBasis {
    axes: [UnitaryHypervector; 3],
    length_scale: f64,
    seed: u64,
}

impl AxisBasis {
    pub fn new(seed: u64, dim: usize, length_scale: f64) -> Result<Self, EncodeError> {
        if !(length_scale.is_finite() && length_scale > 0.0) {
            return Err(EncodeError::InvalidParameter(format!(
                "length scale must be positive, got {length_scale}"
            )));
        }
        let mut rng = SeededRng::with_stream(seed, streams::SSP_BASIS);
        let axes = [
            UnitaryHypervector::sample(&mut rng, dim)?,
            UnitaryHypervector::sample(&mut rng, dim)?,
            UnitaryHypervector::sample(&mut rng, dim)?,
        ];
        Ok(Self {
            axes,
            length_scale,
            seed,
        })
    }

    pub fn from_axes(axes: [UnitaryHypervector; 3], length_scale: f64) -> Result<Self, EncodeError> {
        let d = axes[0].dim();
        if axes.iter().any(|a| a.dim() != d) {
            return Err(VsaError::DimensionMismatch {
                left: d,
                right: axes.iter().map(|a| a.dim()).find(|&x| x != d).unwrap(),
            }
            .into());
        }
        Ok(Self {
            axes,
            length_scale,
            seed: 0,
        })
    }

    pub fn axis(&self, k: usize) -> &UnitaryHypervector {
        &self.axes[k]
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.axes[0].dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SspElementCodebook {
    elements: Vec<UnitaryHypervector>,
    seed: u64,
}

impl SspElementCodebook {
    pub fn new(seed: u64, dim: usize) -> Result<Self, EncodeError> {
        let mut rng = SeededRng::with_stream(seed, streams::SSP_CODEBOOK);
        let elements = (0..MAX_ELEMENT)
            .map(|_| UnitaryHypervector::sample(&mut rng, dim))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { elements, seed })
    }

    pub fn element(&self, z: u8) -> &UnitaryHypervector {
        &self.elements[usize::from(z) - 1]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }
}

/// Codebook and basis drawn from one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SspEncoder {
    pub codebook: SspElementCodebook,
    pub basis: AxisBasis,
}

impl SspEncoder {
    pub fn new(seed: u64, dim: usize, length_scale: f64) -> Result<Self, EncodeError> {
        Ok(Self {
            codebook: SspElementCodebook::new(seed, dim)?,
            basis: AxisBasis::new(seed, dim, length_scale)?,
        })
    }

    pub fn encode(&self, g: &MoleculeGraph) -> Result<GraphHypervector, EncodeError> {
        encode_sspgraphd(g, &self.codebook, &self.basis)
    }
}

pub fn encode_position(p: [f64; 3], basis: &AxisBasis) -> Result<UnitaryHypervector, EncodeError> {
    if p.iter().any(|c| !c.is_finite()) {
        return Err(EncodeError::InvalidParameter(format!(
            "non-finite position {p:?}"
        )));
    }
    let l = basis.length_scale;
    let sx = basis.axes[0].frac_power(p[0] / l);
    let sy = basis.axes[1].frac_power(p[1] / l);
    let sz = basis.axes[2].frac_power(p[2] / l);
    Ok(sx.bind(&sy)?.bind(&sz)?)
}

/// `SM = Σ OBJ_i ⊗ S(p_i)`, not renormalized.
pub fn encode_spatial_memory<V: AsRef<[f64]>>(
    objects: &[(V, [f64; 3])],
    basis: &AxisBasis,
) -> Result<DenseHypervector, EncodeError> {
    if objects.is_empty() {
        return Err(EncodeError::InvalidParameter(
            "spatial memory needs at least one object".to_string(),
        ));
    }
    let mut memory = DenseHypervector::zeros(basis.dim());
    for (obj, p) in objects {
        let s = encode_position(*p, basis)?;
        memory.add_assign(&fft::circular_convolve(obj.as_ref(), s.values())?)?;
    }
    Ok(memory)
}

/// Unbinds `object` from a spatial memory, `SM ⊗ object⁻¹`. The result
/// approximates the position code stored with `object`.
pub fn query_spatial_memory(
    memory: &DenseHypervector,
    object: &UnitaryHypervector,
) -> Result<DenseHypervector, EncodeError> {
    Ok(memory.bind(object.invert().values())?)
}

fn canonical_cmp(a: &Atom, b: &Atom) -> Ordering {
    a.element().cmp(&b.element()).then_with(|| {
        let (p, q) = (a.position(), b.position());
        p[0].total_cmp(&q[0])
            .then(p[1].total_cmp(&q[1]))
            .then(p[2].total_cmp(&q[2]))
    })
}

pub fn object_vector(
    g: &MoleculeGraph,
    index: usize,
    cb: &SspElementCodebook,
) -> Result<DenseHypervector, EncodeError> {
    if index >= g.atom_count() {
        return Err(EncodeError::AtomIndex {
            index,
            atoms: g.atom_count(),
        });
    }
    let neighbours = g.neighbours();
    object_from(g, index, &neighbours[index], cb)
}

fn object_from(
    g: &MoleculeGraph,
    index: usize,
    neighbours: &[(usize, f64)],
    cb: &SspElementCodebook,
) -> Result<DenseHypervector, EncodeError> {
    let atoms = g.atoms();
    let own = cb.element(atoms[index].element());
    if neighbours.is_empty() {
        return Ok(own.to_dense());
    }
    let mut order: Vec<usize> = neighbours.iter().map(|&(j, _)| j).collect();
    order.sort_by(|&a, &b| canonical_cmp(&atoms[a], &atoms[b]));
    let mut memory = DenseHypervector::zeros(cb.dim());
    for j in order {
        memory.add_assign(cb.element(atoms[j].element()).values())?;
    }
    match memory.normalized() {
        Ok(unit) => Ok(unit.bind(own.values())?),
        // a cancelling neighbourhood carries no information
        Err(VsaError::ZeroNorm) => Ok(own.to_dense()),
        Err(e) => Err(e.into()),
    }
}

pub fn encode_sspgraphd(
    g: &MoleculeGraph,
    cb: &SspElementCodebook,
    basis: &AxisBasis,
) -> Result<GraphHypervector, EncodeError> {
    if g.atom_count() == 0 {
        return Err(EncodeError::EmptyGraph);
    }
    if cb.dim() != basis.dim() {
        return Err(VsaError::DimensionMismatch {
            left: cb.dim(),
            right: basis.dim(),
        }
        .into());
    }
    let atoms = g.atoms();
    let neighbours = g.neighbours();
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by(|&a, &b| canonical_cmp(&atoms[a], &atoms[b]));
    let mut acc = DenseHypervector::zeros(basis.dim());
    for i in order {
        let obj = object_from(g, i, &neighbours[i], cb)?;
        let s = encode_position(atoms[i].position(), basis)?;
        acc.add_assign(&fft::circular_convolve(obj.values(), s.values())?)?;
    }
    Ok(acc.scale(0.5))
}
