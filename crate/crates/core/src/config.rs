//! Experiment configuration and the built-in presets.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelConfig;
use crate::error::{check, Error, Result};
use crate::source::SourceParams;
use crate::spatial::SpatialConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimSettings {
    pub slots: u64,
    pub topologies: usize,
    pub base_seed: u64,
    /// Keep every n-th slot's uncertainty in the run result; 0 keeps none.
    #[serde(default)]
    pub trace_decimation: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OutputSettings {
    /// Destination file; standard output when absent.
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// One full parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExperimentConfig")]
pub struct ExperimentConfig {
    pub source: SourceParams,
    pub spatial: SpatialConfig,
    pub channel: ChannelConfig,
    pub sim: SimSettings,
    pub output: OutputSettings,
}

#[derive(Deserialize)]
struct RawExperimentConfig {
    source: SourceParams,
    spatial: SpatialConfig,
    channel: ChannelConfig,
    sim: SimSettings,
    #[serde(default)]
    output: OutputSettings,
}

impl TryFrom<RawExperimentConfig> for ExperimentConfig {
    type Error = Error;

    fn try_from(raw: RawExperimentConfig) -> Result<Self> {
        let cfg = ExperimentConfig {
            source: raw.source,
            spatial: raw.spatial,
            channel: raw.channel,
            sim: raw.sim,
            output: raw.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        check(self.sim.slots >= 1, "sim.slots", self.sim.slots as f64, "must be at least 1")?;
        check(
            self.sim.topologies >= 1,
            "sim.topologies",
            self.sim.topologies as f64,
            "must be at least 1",
        )
    }

    /// Same experiment with `K` rings.
    pub fn with_num_rings(&self, num_rings: usize) -> Result<Self> {
        Ok(Self {
            spatial: self.spatial.with_num_rings(num_rings)?,
            ..self.clone()
        })
    }

    pub fn preset(name: &str) -> Option<Self> {
        Preset::from_name(name).map(Preset::config)
    }
}

/// Parameter sets behind each reproduced figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Uncertainty timeline, coverage radius 6R, zeta = 5e-4.
    Fig2a,
    /// Uncertainty timeline, coverage radius 15R, zeta = 5e-4.
    Fig2b,
    /// Entropy against radius; 20 topologies of 1e6 slots for validation.
    Fig3,
    /// Optimal radius against asymmetry.
    Fig4,
    /// Uncertainty CDF, symmetric source, 125 m snapped to 13 rings.
    Fig5,
    /// `Fig3` at K = 6 with 5 topologies of 1e5 slots.
    Desk,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Desk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Desk => "desk",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn config(self) -> ExperimentConfig {
        let (zeta, rings, slots, topologies) = match self {
            Preset::Fig2a => (5e-4, 6, 5_000, 1),
            Preset::Fig2b => (5e-4, 15, 5_000, 1),
            Preset::Fig3 | Preset::Fig4 => (1e-4, 6, 1_000_000, 20),
            Preset::Fig5 => (1e-4, 13, 1_000_000, 20),
            Preset::Desk => (1e-4, 6, 100_000, 5),
        };
        ExperimentConfig {
            source: SourceParams::new(5e-3, 1.0).expect("preset source"),
            spatial: SpatialConfig::new(10.0, rings, 5e-2, 0.02).expect("preset geometry"),
            channel: ChannelConfig::new(zeta, 0.1).expect("preset channel"),
            sim: SimSettings {
                slots,
                topologies,
                base_seed: 1,
                trace_decimation: 0,
            },
            output: OutputSettings::default(),
        }
    }
}
