//! Spatio-temporal information freshness for remote monitoring.
//!
//! A receiver tracks a two-state Markov source through readings from
//! sensors spread over a disc. Sensors farther from the centre report the
//! true state less reliably, and they share a slotted ALOHA collision
//! channel. The receiver keeps only the last decoded reading and its age.
//! This crate computes the receiver's conditional entropy in closed form,
//! its distribution, the coverage radius that minimises it, and a
//! slot-level simulator that checks the analysis on static topologies.

pub mod belief;
pub mod channel;
pub mod config;
pub mod error;
pub mod sim;
pub mod source;
pub mod spatial;
pub mod sweep;

pub use belief::{
    aggregate_correct_prob, conditional_entropy_h, posterior_at_reception, reading_marginal, BeliefTable,
    ReceiverModel, ReceiverState, UncertaintyDistribution,
};
pub use channel::{aoi_mean, aoi_optimal_radius, aoi_pmf, success_prob, AoiRadius, ChannelConfig};
pub use config::{ExperimentConfig, OutputFormat, OutputSettings, Preset, SimSettings};
pub use error::{Error, Result};
pub use sim::{run, run_batch, timeline, AccessModel, BatchResult, SimResult, Simulation, TimelinePoint, Topology};
pub use source::{entropy, Dist2, SourceParams};
pub use spatial::{NodeCount, PowerLaw, ReliabilityLaw, SpatialConfig};
pub use sweep::{entropy_vs_radius, optimal_radius, sweep, CurvePoint, OptResult, SweepParam, SweepRow, SweepSpec, SweepTable};
