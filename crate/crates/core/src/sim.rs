//! Slot-level simulation over a static topology.
//!
//! Each slot the source moves one step, every node transmits with
//! probability `zeta`, each transmission survives erasure with probability
//! `1 - epsilon`, and a lone surviving packet is decoded. The decoded
//! reading is the true state with the sender ring's reliability and flipped
//! otherwise. The receiver does not know where the sender sits, so its
//! uncertainty is always evaluated with the ring-averaged `c`.
//!
//! Streams are `ChaCha8Rng` seeded with `seed_from_u64`, which is stable
//! across platforms. Run `i` of a batch uses seed
//! `base_seed + i * 0x9E3779B97F4A7C15` (wrapping), so run 0 reproduces a
//! single run with the base seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{ReceiverModel, ReceiverState};
use crate::config::ExperimentConfig;
use crate::error::{check, Result};
use crate::spatial::SpatialConfig;

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of run `index` in a batch.
pub fn run_seed(base_seed: u64, index: usize) -> u64 {
    base_seed.wrapping_add((index as u64).wrapping_mul(SEED_STRIDE))
}

/// Ring index of every node; positions inside a ring do not matter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    rings: Vec<u32>,
    seed: u64,
}

impl Topology {
    pub fn generate(spatial: &SpatialConfig, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::draw(spatial, seed, &mut rng)
    }

    fn draw(spatial: &SpatialConfig, seed: u64, rng: &mut ChaCha8Rng) -> Result<Self> {
        let m = spatial.node_count().for_simulation()?;
        let rings = (0..m).map(|_| spatial.sample_region(rng) as u32).collect();
        Ok(Self { rings, seed })
    }

    pub fn rings(&self) -> &[u32] {
        &self.rings
    }

    pub fn len(&self) -> usize {
        self.rings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Nodes per ring.
    pub fn occupancy(&self, num_rings: usize) -> Vec<usize> {
        let mut counts = vec![0; num_rings];
        for &r in &self.rings {
            counts[r as usize] += 1;
        }
        counts
    }

    /// Probability that a reading from a uniformly chosen node of this
    /// topology is correct.
    pub fn realized_correct_prob(&self, spatial: &SpatialConfig) -> f64 {
        let n = self.rings.len() as f64;
        self.occupancy(spatial.num_rings())
            .iter()
            .enumerate()
            .map(|(d, &count)| count as f64 / n * spatial.reliability(d).unwrap_or(0.0))
            .sum()
    }
}

/// How the per-slot channel outcome is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccessModel {
    /// Number of surviving packets drawn as one binomial; a lone sender is
    /// picked uniformly among the nodes.
    #[default]
    Aggregated,
    /// Independent transmit and erasure draws for every node.
    PerNode,
}

/// Everything that happened in one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotRecord {
    pub slot: u64,
    pub source_state: u8,
    pub receiver: ReceiverState,
    pub h: f64,
    /// Ring of the decoded sender and whether its reading was correct.
    pub reception: Option<(u32, bool)>,
}

pub struct Simulation {
    model: ReceiverModel,
    topology: Topology,
    reliability: Vec<f64>,
    flip_to: [f64; 2],
    attempt: f64,
    zeta: f64,
    epsilon: f64,
    binomial: Binomial,
    access: AccessModel,
    rng: ChaCha8Rng,
    state: u8,
    receiver: ReceiverState,
    slot: u64,
}

impl Simulation {
    /// Draws a topology and the initial source state from `seed`.
    pub fn new(config: &ExperimentConfig, seed: u64) -> Result<Self> {
        let spatial = &config.spatial;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topology = Topology::draw(spatial, seed, &mut rng)?;
        let model = ReceiverModel::new(config.source, spatial, &config.channel)?;
        let reliability = (0..spatial.num_rings())
            .map(|d| spatial.reliability(d))
            .collect::<Result<Vec<_>>>()?;
        let a = config.source.transition_matrix();
        let attempt = config.channel.effective_attempt_prob();
        let binomial = Binomial::new(topology.len() as u64, attempt).map_err(|_| crate::error::Error::InvalidParameter {
            name: "zeta * (1 - epsilon)",
            value: attempt,
            reason: "not a probability",
        })?;
        let state = u8::from(rng.random::<f64>() < config.source.stationary_dist().p1);
        Ok(Self {
            model,
            topology,
            reliability,
            flip_to: [a[0][1], a[1][0]],
            attempt,
            zeta: config.channel.zeta(),
            epsilon: config.channel.epsilon(),
            binomial,
            access: AccessModel::default(),
            rng,
            state,
            receiver: ReceiverState::Unreached,
            slot: 0,
        })
    }

    pub fn with_access(mut self, access: AccessModel) -> Self {
        self.access = access;
        self
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn model(&self) -> &ReceiverModel {
        &self.model
    }

    /// Index of the single node whose packet got through, if any.
    fn lone_sender(&mut self) -> Option<usize> {
        match self.access {
            AccessModel::Aggregated => {
                if self.attempt <= 0.0 || self.binomial.sample(&mut self.rng) != 1 {
                    None
                } else {
                    Some(self.rng.random_range(0..self.topology.len()))
                }
            }
            AccessModel::PerNode => {
                let mut sender = None;
                let mut survivors = 0;
                for node in 0..self.topology.len() {
                    if self.rng.random::<f64>() < self.zeta && self.rng.random::<f64>() >= self.epsilon {
                        survivors += 1;
                        sender = Some(node);
                    }
                }
                if survivors == 1 {
                    sender
                } else {
                    None
                }
            }
        }
    }

    pub fn step(&mut self) -> SlotRecord {
        if self.rng.random::<f64>() < self.flip_to[self.state as usize] {
            self.state ^= 1;
        }
        let reception = self.lone_sender().map(|node| {
            let ring = self.topology.rings[node];
            let correct = self.rng.random::<f64>() < self.reliability[ring as usize];
            (ring, correct)
        });
        let decoded = reception.map(|(_, correct)| if correct { self.state } else { self.state ^ 1 });
        self.receiver = self.receiver.advance(decoded);
        let record = SlotRecord {
            slot: self.slot,
            source_state: self.state,
            receiver: self.receiver,
            h: self.model.uncertainty(self.receiver),
            reception,
        };
        self.slot += 1;
        record
    }
}

impl Iterator for Simulation {
    type Item = SlotRecord;

    fn next(&mut self) -> Option<SlotRecord> {
        Some(self.step())
    }
}

/// Aggregates of one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub seed: u64,
    pub slots: u64,
    /// Mean uncertainty over all slots, warm-up included.
    pub time_avg_h: f64,
    pub empirical_ps: f64,
    /// Mean age over slots after the first reception; NaN if none.
    pub empirical_aoi_mean: f64,
    pub reception_count: u64,
    pub flipped_readings: u64,
    /// `(slot, h)` every `trace_decimation` slots.
    #[serde(default)]
    pub h_samples: Vec<(u64, f64)>,
}

/// Runs `config.sim.slots` slots with the aggregated channel draw.
pub fn run(config: &ExperimentConfig, seed: u64) -> Result<SimResult> {
    run_with(config, seed, config.sim.slots, AccessModel::default())
}

pub fn run_with(config: &ExperimentConfig, seed: u64, slots: u64, access: AccessModel) -> Result<SimResult> {
    config.validate()?;
    check(slots >= 1, "slots", slots as f64, "must be at least 1")?;
    let sim = Simulation::new(config, seed)?.with_access(access);
    let decimation = config.sim.trace_decimation;

    let mut sum_h = 0.0;
    let (mut receptions, mut flips) = (0u64, 0u64);
    let (mut age_sum, mut tracked) = (0.0, 0u64);
    let mut h_samples = Vec::new();
    for rec in sim.take(slots as usize) {
        sum_h += rec.h;
        if let Some((_, correct)) = rec.reception {
            receptions += 1;
            flips += u64::from(!correct);
        }
        if let ReceiverState::Tracking { age, .. } = rec.receiver {
            age_sum += age as f64;
            tracked += 1;
        }
        if decimation > 0 && rec.slot % decimation == 0 {
            h_samples.push((rec.slot, rec.h));
        }
    }

    Ok(SimResult {
        seed,
        slots,
        time_avg_h: sum_h / slots as f64,
        empirical_ps: receptions as f64 / slots as f64,
        empirical_aoi_mean: if tracked > 0 { age_sum / tracked as f64 } else { f64::NAN },
        reception_count: receptions,
        flipped_readings: flips,
        h_samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub mean: f64,
    /// Standard error of the mean across runs; zero for a single run.
    pub std_error: f64,
    pub runs: Vec<SimResult>,
}

/// Independent topologies, run in parallel and reported in run order.
pub fn run_batch(config: &ExperimentConfig, num_topologies: usize, slots_per_run: u64, base_seed: u64) -> Result<BatchResult> {
    check(
        num_topologies >= 1,
        "num_topologies",
        num_topologies as f64,
        "must be at least 1",
    )?;
    let runs = (0..num_topologies)
        .into_par_iter()
        .map(|i| run_with(config, run_seed(base_seed, i), slots_per_run, AccessModel::default()))
        .collect::<Result<Vec<_>>>()?;
    let n = runs.len() as f64;
    let mean = runs.iter().map(|r| r.time_avg_h).sum::<f64>() / n;
    let std_error = if runs.len() > 1 {
        let var = runs.iter().map(|r| (r.time_avg_h - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(BatchResult { mean, std_error, runs })
}

/// One row of a per-slot trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimelinePoint {
    pub slot: u64,
    pub h: f64,
    /// Last decoded reading; absent before the first reception.
    pub y: Option<u8>,
    pub delta: Option<u64>,
    pub reception: bool,
}

pub fn timeline(config: &ExperimentConfig, seed: u64, num_slots: u64) -> Result<Vec<TimelinePoint>> {
    config.validate()?;
    let sim = Simulation::new(config, seed)?;
    Ok(sim
        .take(num_slots as usize)
        .map(|rec| {
            let (y, delta) = match rec.receiver {
                ReceiverState::Unreached => (None, None),
                ReceiverState::Tracking { reading, age } => (Some(reading), Some(age)),
            };
            TimelinePoint {
                slot: rec.slot,
                h: rec.h,
                y,
                delta,
                reception: rec.reception.is_some(),
            }
        })
        .collect())
}
