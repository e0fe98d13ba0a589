//! Entropy-versus-radius curves and exhaustive search for the radius that
//! minimises the receiver's average uncertainty.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::ReceiverModel;
use crate::channel::{aoi_optimal_radius, AoiRadius, ChannelConfig};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::source::SourceParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub num_rings: usize,
    pub radius: f64,
    pub h: f64,
    pub success_prob: f64,
    pub correct_prob: f64,
}

/// Evaluates the analytic conditional entropy of `config` at one ring count.
pub fn evaluate(config: &ExperimentConfig, num_rings: usize) -> Result<CurvePoint> {
    let spatial = config.spatial.with_num_rings(num_rings)?;
    let model = ReceiverModel::new(config.source, &spatial, &config.channel)?;
    Ok(CurvePoint {
        num_rings,
        radius: spatial.coverage_radius(),
        h: model.avg_conditional_entropy()?,
        success_prob: model.success_prob(),
        correct_prob: model.correct_prob(),
    })
}

/// `H(X_n | Y_n, Delta_n)` at each ring count, in input order.
pub fn entropy_vs_radius(config: &ExperimentConfig, ring_counts: &[usize]) -> Result<Vec<CurvePoint>> {
    if ring_counts.is_empty() {
        return Err(Error::InvalidGrid("empty ring range".into()));
    }
    ring_counts
        .par_iter()
        .map(|&k| evaluate(config, k))
        .collect()
}

/// `ceil(2 R_AoI / R)`.
pub fn default_max_rings(config: &ExperimentConfig) -> Result<usize> {
    let aoi = aoi_radius(config)?;
    Ok(((2.0 * aoi.radius / config.spatial.ring_width()).ceil() as usize).max(1))
}

pub fn aoi_radius(config: &ExperimentConfig) -> Result<AoiRadius> {
    aoi_optimal_radius(
        config.spatial.density(),
        config.channel.zeta(),
        config.channel.epsilon(),
        config.spatial.ring_width(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub k_star: usize,
    pub r_m_star: f64,
    pub h_star: f64,
    pub r_aoi: f64,
    pub r_aoi_erasure_variant: f64,
    /// `(K, H)` for `K = 1..=k_max`.
    pub curve: Vec<(usize, f64)>,
}

/// Scans `K = 1..=max_rings`; ties go to the smaller radius.
pub fn optimal_radius(config: &ExperimentConfig, max_rings: usize) -> Result<OptResult> {
    if max_rings == 0 {
        return Err(Error::InvalidGrid("max_rings must be at least 1".into()));
    }
    let ks: Vec<usize> = (1..=max_rings).collect();
    let curve: Vec<(usize, f64)> = entropy_vs_radius(config, &ks)?
        .into_iter()
        .map(|p| (p.num_rings, p.h))
        .collect();
    let (k_star, h_star) = curve
        .iter()
        .copied()
        .fold((0, f64::INFINITY), |best, (k, h)| if h < best.1 { (k, h) } else { best });
    let aoi = aoi_radius(config)?;
    Ok(OptResult {
        k_star,
        r_m_star: k_star as f64 * config.spatial.ring_width(),
        h_star,
        r_aoi: aoi.radius,
        r_aoi_erasure_variant: aoi.radius_erasure_variant,
        curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    K,
    Eta,
    Alpha,
    Zeta,
    Epsilon,
    Q,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::K => "k",
            SweepParam::Eta => "eta",
            SweepParam::Alpha => "alpha",
            SweepParam::Zeta => "zeta",
            SweepParam::Epsilon => "epsilon",
            SweepParam::Q => "q",
        }
    }

    /// `config` with this parameter set to `value`. `K` is applied as the
    /// ring count of the base geometry.
    pub fn apply(self, config: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut out = config.clone();
        match self {
            SweepParam::K => out.spatial = config.spatial.with_num_rings(value as usize)?,
            SweepParam::Eta => out.source = SourceParams::new(config.source.q(), value)?,
            SweepParam::Q => out.source = SourceParams::new(value, config.source.eta())?,
            SweepParam::Alpha => out.spatial = config.spatial.with_alpha(value)?,
            SweepParam::Zeta => out.channel = ChannelConfig::new(value, config.channel.epsilon())?,
            SweepParam::Epsilon => out.channel = ChannelConfig::new(config.channel.zeta(), value)?,
        }
        Ok(out)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Ok(SweepParam::K),
            "eta" => Ok(SweepParam::Eta),
            "alpha" => Ok(SweepParam::Alpha),
            "zeta" => Ok(SweepParam::Zeta),
            "epsilon" => Ok(SweepParam::Epsilon),
            "q" => Ok(SweepParam::Q),
            other => Err(Error::InvalidGrid(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub base: ExperimentConfig,
    /// Upper ring count of each scan; `None` uses [`default_max_rings`] per
    /// grid point. For a `K` sweep the grid value itself is the cap.
    pub max_rings: Option<usize>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidGrid("sweep grid is empty".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("sweep grid holds a non-finite value".into()));
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidGrid("sweep grid must be strictly increasing".into()));
        }
        if self.param == SweepParam::K && self.values.iter().any(|&v| v < 1.0 || v.fract() != 0.0) {
            return Err(Error::InvalidGrid("K values must be positive integers".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub k_star: usize,
    pub r_m_star: f64,
    pub h_star: f64,
    pub r_aoi: f64,
    pub r_aoi_erasure_variant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub param: SweepParam,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn radius_non_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].r_m_star >= w[0].r_m_star)
    }

    pub fn entropy_non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].h_star <= w[0].h_star)
    }
}

/// One radius optimisation per grid value, in grid order.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let rows = spec
        .values
        .par_iter()
        .map(|&value| {
            let (config, max_rings) = if spec.param == SweepParam::K {
                (spec.base.clone(), value as usize)
            } else {
                let config = spec.param.apply(&spec.base, value)?;
                let max_rings = match spec.max_rings {
                    Some(k) => k,
                    None => default_max_rings(&config)?,
                };
                (config, max_rings)
            };
            let opt = optimal_radius(&config, max_rings)?;
            Ok(SweepRow {
                sweep_value: value,
                k_star: opt.k_star,
                r_m_star: opt.r_m_star,
                h_star: opt.h_star,
                r_aoi: opt.r_aoi,
                r_aoi_erasure_variant: opt.r_aoi_erasure_variant,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { param: spec.param, rows })
}
