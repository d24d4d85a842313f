//! Liquid state machine: a random recurrent network of leaky
//! integrate-and-fire neurons driven by spike frames.
//!
//! Neurons occupy the first `size` sites of the most cubic integer lattice
//! with at least `size` points (x varies fastest). The first
//! `⌈exc_fraction · size⌉` neurons are excitatory, the rest inhibitory. A
//! directed synapse `i → j` (`i ≠ j`) exists with probability
//! `conn_scale · exp(−d(i, j)² / conn_lambda²)`; its weight is
//! `|N(0, weight_std)|`, positive for excitatory sources and negative for
//! inhibitory ones. Each of the 165 frame slots projects to a random
//! `input_fraction` of the neurons with weight `|N(0, input_weight_std)|`.
//!
//! Simulation uses forward Euler at step `dt`:
//! `v ← v·(1 − dt/tau_m) + dt·I`, where `I` sums the input weights of the
//! active frame slots and the recurrent weights of neurons that spiked on the
//! previous step. A neuron spikes when `v ≥ v_thresh`, resets to `v_reset`
//! and ignores input for `round(refractory / dt)` steps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{streams, SeededRng};
use crate::spike::{SpikeFrame, FRAME_LEN};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReservoirError {
    #[error("reservoir size {0} is below the minimum of 10")]
    TooSmall(usize),
    #[error("invalid reservoir configuration: {0}")]
    InvalidConfig(String),
    #[error("no spike frames to run")]
    NoFrames,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LifParams {
    /// Membrane time constant, ms.
    pub tau_m: f64,
    pub v_thresh: f64,
    pub v_reset: f64,
    /// Refractory period, ms.
    pub refractory: f64,
    /// Integration step, ms.
    pub dt: f64,
}

impl Default for LifParams {
    fn default() -> Self {
        Self {
            tau_m: 20.0,
            v_thresh: 1.0,
            v_reset: 0.0,
            refractory: 2.0,
            dt: 1.0,
        }
    }
}

impl LifParams {
    pub fn refractory_steps(&self) -> usize {
        (self.refractory / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReservoirConfig {
    pub size: usize,
    pub exc_fraction: f64,
    pub conn_scale: f64,
    /// Connection length scale in lattice units.
    pub conn_lambda: f64,
    pub weight_std: f64,
    pub input_fraction: f64,
    pub input_weight_std: f64,
    pub lif: LifParams,
    /// Steps each frame is presented.
    pub frame_dwell: usize,
    /// Zero-input steps after the last frame.
    pub settle: usize,
    pub seed: u64,
}

impl Default for ReservoirConfig {
    fn default() -> Self {
        Self {
            size: 400,
            exc_fraction: 0.8,
            conn_scale: 0.3,
            conn_lambda: 2.0,
            weight_std: 1.0,
            input_fraction: 0.1,
            input_weight_std: 1.0,
            lif: LifParams::default(),
            frame_dwell: 5,
            settle: 20,
            seed: 0,
        }
    }
}

impl ReservoirConfig {
    pub fn validate(&self) -> Result<(), ReservoirError> {
        let bad = |msg: &str| Err(ReservoirError::InvalidConfig(msg.to_string()));
        if self.size < 10 {
            return Err(ReservoirError::TooSmall(self.size));
        }
        if !(self.exc_fraction > 0.0 && self.exc_fraction < 1.0) {
            return bad("exc_fraction must lie strictly between 0 and 1");
        }
        if !(self.conn_scale >= 0.0 && self.conn_scale <= 1.0) {
            return bad("conn_scale must lie in [0, 1]");
        }
        if !(self.conn_lambda > 0.0) {
            return bad("conn_lambda must be positive");
        }
        if !(self.weight_std >= 0.0 && self.input_weight_std >= 0.0) {
            return bad("weight standard deviations must be non-negative");
        }
        if !(self.input_fraction > 0.0 && self.input_fraction <= 1.0) {
            return bad("input_fraction must lie in (0, 1]");
        }
        let lif = &self.lif;
        if !(lif.tau_m > 0.0 && lif.dt > 0.0 && lif.refractory > 0.0) {
            return bad("time constants must be positive");
        }
        if lif.dt > lif.refractory {
            return bad("dt must not exceed the refractory period");
        }
        if !(lif.v_thresh > lif.v_reset) {
            return bad("v_thresh must exceed v_reset");
        }
        if self.frame_dwell == 0 {
            return bad("frame_dwell must be at least 1");
        }
        Ok(())
    }

    pub fn excitatory_count(&self) -> usize {
        // the epsilon keeps 0.8·n from rounding up when it is an integer
        ((self.exc_fraction * self.size as f64) - 1e-9).ceil() as usize
    }
}

/// Most cubic `[nx, ny, nz]` with `nx·ny·nz ≥ n`.
pub fn lattice_dims(n: usize) -> [usize; 3] {
    let side = (1..).find(|k| k * k * k >= n).unwrap();
    let mut dims = [side; 3];
    for axis in 0..3 {
        while dims[axis] > 1 {
            let mut trial = dims;
            trial[axis] -= 1;
            if trial.iter().product::<usize>() >= n {
                dims = trial;
            } else {
                break;
            }
        }
    }
    dims
}

pub fn lattice_position(index: usize, dims: [usize; 3]) -> [f64; 3] {
    [
        (index % dims[0]) as f64,
        ((index / dims[0]) % dims[1]) as f64,
        (index / (dims[0] * dims[1])) as f64,
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirState {
    /// Spike count per neuron divided by the number of simulated steps.
    pub rates: Vec<f64>,
}

/// Full record of a simulation, for inspection and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub state: ReservoirState,
    /// Membrane potential of every neuron after each step (`steps × size`).
    pub voltages: Vec<Vec<f64>>,
    /// Step indices at which each neuron spiked.
    pub spike_steps: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reservoir {
    config: ReservoirConfig,
    excitatory: Vec<bool>,
    /// Outgoing `(target, weight)` lists per source neuron.
    recurrent: Vec<Vec<(usize, f64)>>,
    /// `(neuron, weight)` lists per frame slot.
    input: Vec<Vec<(usize, f64)>>,
}

impl Reservoir {
    pub fn build(config: &ReservoirConfig) -> Result<Self, ReservoirError> {
        config.validate()?;
        let n = config.size;
        let mut rng = SeededRng::with_stream(config.seed, streams::RESERVOIR);
        let n_exc = config.excitatory_count();
        let excitatory: Vec<bool> = (0..n).map(|k| k < n_exc).collect();

        let dims = lattice_dims(n);
        let positions: Vec<[f64; 3]> = (0..n).map(|k| lattice_position(k, dims)).collect();
        let lambda2 = config.conn_lambda * config.conn_lambda;
        let mut recurrent = vec![Vec::new(); n];
        for (i, out) in recurrent.iter_mut().enumerate() {
            let sign = if excitatory[i] { 1.0 } else { -1.0 };
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d2 = squared_distance(positions[i], positions[j]);
                let p = config.conn_scale * (-d2 / lambda2).exp();
                if rng.uniform() < p {
                    let w = rng.normal(0.0, config.weight_std).abs();
                    out.push((j, sign * w));
                }
            }
        }

        let fan_out = ((config.input_fraction * n as f64).round() as usize).clamp(1, n);
        let input = (0..FRAME_LEN)
            .map(|_| {
                let mut targets = rng.sample_indices(n, fan_out);
                targets.sort_unstable();
                targets
                    .into_iter()
                    .map(|t| (t, rng.normal(0.0, config.input_weight_std).abs()))
                    .collect()
            })
            .collect();

        Ok(Self {
            config: config.clone(),
            excitatory,
            recurrent,
            input,
        })
    }

    /// Reservoir from explicit connectivity. `recurrent[i]` lists the
    /// `(target, weight)` synapses of neuron `i`; `input[s]` the
    /// `(neuron, weight)` projections of frame slot `s`.
    pub fn from_parts(
        config: ReservoirConfig,
        excitatory: Vec<bool>,
        recurrent: Vec<Vec<(usize, f64)>>,
        input: Vec<Vec<(usize, f64)>>,
    ) -> Result<Self, ReservoirError> {
        let lif_only = ReservoirConfig {
            size: config.size.max(10),
            ..config.clone()
        };
        lif_only.validate()?;
        let n = config.size;
        let bad = |msg: String| Err(ReservoirError::InvalidConfig(msg));
        if excitatory.len() != n || recurrent.len() != n {
            return bad(format!("expected {n} neurons"));
        }
        if input.len() != FRAME_LEN {
            return bad(format!("expected {FRAME_LEN} input slots"));
        }
        for (i, out) in recurrent.iter().enumerate() {
            for &(t, w) in out {
                if t >= n || t == i {
                    return bad(format!("synapse {i} -> {t} invalid"));
                }
                if (excitatory[i] && w < 0.0) || (!excitatory[i] && w > 0.0) {
                    return bad(format!("synapse {i} -> {t} violates the E/I sign"));
                }
            }
        }
        if input.iter().flatten().any(|&(t, _)| t >= n) {
            return bad("input projection to a missing neuron".to_string());
        }
        Ok(Self {
            config,
            excitatory,
            recurrent,
            input,
        })
    }

    pub fn config(&self) -> &ReservoirConfig {
        &self.config
    }

    pub fn size(&self) -> usize {
        self.excitatory.len()
    }

    pub fn excitatory(&self) -> &[bool] {
        &self.excitatory
    }

    pub fn recurrent(&self) -> &[Vec<(usize, f64)>] {
        &self.recurrent
    }

    pub fn input(&self) -> &[Vec<(usize, f64)>] {
        &self.input
    }

    pub fn synapse_count(&self) -> usize {
        self.recurrent.iter().map(Vec::len).sum()
    }

    pub fn run(&self, frames: &[SpikeFrame]) -> Result<ReservoirState, ReservoirError> {
        self.simulate(frames, false).map(|r| r.state)
    }

    /// Like [`Reservoir::run`] but also returns voltage traces and spike times.
    pub fn run_recorded(&self, frames: &[SpikeFrame]) -> Result<RunRecord, ReservoirError> {
        self.simulate(frames, true)
    }

    fn simulate(&self, frames: &[SpikeFrame], record: bool) -> Result<RunRecord, ReservoirError> {
        if frames.is_empty() {
            return Err(ReservoirError::NoFrames);
        }
        let n = self.size();
        let lif = self.config.lif;
        let leak = 1.0 - lif.dt / lif.tau_m;
        let refractory_steps = lif.refractory_steps();
        let dwell = self.config.frame_dwell;
        let steps = frames.len() * dwell + self.config.settle;

        let mut v = vec![lif.v_reset; n];
        let mut blocked = vec![0usize; n];
        let mut counts = vec![0usize; n];
        let mut current = vec![0.0; n];
        let mut fired: Vec<usize> = Vec::new();
        let mut voltages = Vec::new();
        let mut spike_steps = vec![Vec::new(); if record { n } else { 0 }];

        for step in 0..steps {
            current.iter_mut().for_each(|c| *c = 0.0);
            if let Some(frame) = frames.get(step / dwell) {
                for slot in frame.active_slots() {
                    for &(t, w) in &self.input[slot] {
                        current[t] += w;
                    }
                }
            }
            for &src in &fired {
                for &(t, w) in &self.recurrent[src] {
                    current[t] += w;
                }
            }
            fired.clear();
            for k in 0..n {
                if blocked[k] > 0 {
                    blocked[k] -= 1;
                    v[k] = lif.v_reset;
                    continue;
                }
                v[k] = v[k] * leak + lif.dt * current[k];
                if v[k] >= lif.v_thresh {
                    v[k] = lif.v_reset;
                    blocked[k] = refractory_steps;
                    counts[k] += 1;
                    fired.push(k);
                    if record {
                        spike_steps[k].push(step);
                    }
                }
            }
            if record {
                voltages.push(v.clone());
            }
        }

        let rates = counts.iter().map(|&c| c as f64 / steps as f64).collect();
        Ok(RunRecord {
            state: ReservoirState { rates },
            voltages,
            spike_steps,
        })
    }
}

fn squared_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
}
