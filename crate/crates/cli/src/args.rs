use clap::{Args, Parser, Subcommand};

use stfresh_core::{ChannelConfig, ExperimentConfig, OutputFormat, Preset, SourceParams, SpatialConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "stfresh", version, about = "Conditional entropy of a forgetful IoT receiver over slotted ALOHA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditional entropy against coverage radius.
    EntropySweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Ring counts as `FIRST:LAST` (inclusive).
        #[arg(long, default_value = "1:60")]
        k_range: String,
    },
    /// Per-slot uncertainty trace of one simulated run.
    Timeline {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of slots; defaults to the config's `sim.slots`.
        #[arg(long)]
        slots: Option<u64>,
    },
    /// Distribution function of the receiver's uncertainty.
    Cdf {
        #[command(flatten)]
        common: CommonArgs,
        /// Coverage radii in meters, snapped to whole rings.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        /// Reliability exponents; defaults to the config's alpha.
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        /// Thresholds in bits as `START:END:COUNT` (inclusive, evenly spaced).
        #[arg(long, default_value = "0:1:1001")]
        w_grid: String,
    },
    /// Entropy-minimising radius across a parameter grid.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
        /// Parameter to sweep: k, eta, alpha, zeta, epsilon or q.
        #[arg(long, default_value = "eta")]
        sweep: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,50")]
        values: Vec<f64>,
        /// Largest ring count searched; defaults to ceil(2 R_AoI / R).
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Monte-Carlo validation over independent topologies.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of topologies; defaults to the config's `sim.topologies`.
        #[arg(long)]
        runs: Option<usize>,
        /// Slots per run; defaults to the config's `sim.slots`.
        #[arg(long)]
        slots: Option<u64>,
    },
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::EntropySweep { common, .. }
            | Command::Timeline { common, .. }
            | Command::Cdf { common, .. }
            | Command::Optimize { common, .. }
            | Command::Simulate { common, .. } => common,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON experiment config; flags override its values.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<String>,
    /// Built-in parameter set: fig2a, fig2b, fig3, fig4, fig5, desk.
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
    #[arg(long)]
    pub json: bool,
    /// Print the resolved config as JSON and exit.
    #[arg(long)]
    pub dump_config: bool,

    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub ring_width: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
}

impl CommonArgs {
    /// Config file or preset (default `fig3`), then flag overrides.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str(&text)?
            }
            (None, Some(name)) => ExperimentConfig::preset(name)
                .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`")))?,
            (None, None) => Preset::Fig3.config(),
        };

        if self.q.is_some() || self.eta.is_some() {
            cfg.source = SourceParams::new(
                self.q.unwrap_or(cfg.source.q()),
                self.eta.unwrap_or(cfg.source.eta()),
            )?;
        }
        if self.alpha.is_some() || self.rho.is_some() || self.ring_width.is_some() || self.k.is_some() {
            let s = cfg.spatial;
            cfg.spatial = SpatialConfig::new(
                self.ring_width.unwrap_or(s.ring_width()),
                self.k.unwrap_or(s.num_rings()),
                self.rho.unwrap_or(s.density()),
                self.alpha.unwrap_or(s.alpha()),
            )?;
        }
        if self.zeta.is_some() || self.epsilon.is_some() {
            cfg.channel = ChannelConfig::new(
                self.zeta.unwrap_or(cfg.channel.zeta()),
                self.epsilon.unwrap_or(cfg.channel.epsilon()),
            )?;
        }
        if let Some(seed) = self.seed {
            cfg.sim.base_seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.output.path = Some(out.clone());
        }
        if self.json {
            cfg.output.format = OutputFormat::Json;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `FIRST:LAST`, inclusive.
pub fn parse_k_range(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("invalid K range `{s}`, expected FIRST:LAST"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let first: usize = a.trim().parse().map_err(|_| bad())?;
    let last: usize = b.trim().parse().map_err(|_| bad())?;
    if first == 0 || first > last {
        return Err(CliError::Usage(format!("K range `{s}` is empty")));
    }
    Ok((first..=last).collect())
}

/// `START:END:COUNT`, evenly spaced and inclusive of both ends.
pub fn parse_w_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || CliError::Usage(format!("invalid threshold grid `{s}`, expected START:END:COUNT"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !(start.is_finite() && end.is_finite()) || (count > 1 && end <= start) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i == count - 1 { end } else { start + i as f64 * step })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("1:3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_k_range("7:7").unwrap(), vec![7]);
        assert!(parse_k_range("5:4").is_err());
        assert!(parse_k_range("0:4").is_err());
        assert!(parse_k_range("4").is_err());
    }

    #[test]
    fn w_grids() {
        assert_eq!(parse_w_grid("0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_w_grid("0.3:0.3:1").unwrap(), vec![0.3]);
        assert!(parse_w_grid("0:1:0").is_err());
        assert!(parse_w_grid("1:0:5").is_err());
        assert!(parse_w_grid("0:1").is_err());
    }
}
