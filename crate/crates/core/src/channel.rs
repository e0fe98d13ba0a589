//! Slotted ALOHA over a collision channel with independent erasures.

use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannelConfig")]
pub struct ChannelConfig {
    zeta: f64,
    epsilon: f64,
}

#[derive(Deserialize)]
struct RawChannelConfig {
    zeta: f64,
    epsilon: f64,
}

impl TryFrom<RawChannelConfig> for ChannelConfig {
    type Error = Error;

    fn try_from(raw: RawChannelConfig) -> Result<Self> {
        ChannelConfig::new(raw.zeta, raw.epsilon)
    }
}

impl ChannelConfig {
    /// `zeta` in `[0, 1]` (zero models a silent population), `epsilon` in `[0, 1)`.
    pub fn new(zeta: f64, epsilon: f64) -> Result<Self> {
        check((0.0..=1.0).contains(&zeta), "zeta", zeta, "must lie in [0, 1]")?;
        check((0.0..1.0).contains(&epsilon), "epsilon", epsilon, "must lie in [0, 1)")?;
        Ok(Self { zeta, epsilon })
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Probability that a given node delivers an unerased packet in a slot.
    pub fn effective_attempt_prob(&self) -> f64 {
        self.zeta * (1.0 - self.epsilon)
    }

    /// Expected number of unerased packets per slot for `nodes` nodes.
    pub fn load(&self, nodes: f64) -> f64 {
        nodes * self.effective_attempt_prob()
    }

    pub fn success_prob(&self, nodes: f64) -> f64 {
        success_prob(nodes, self.zeta, self.epsilon)
    }
}

/// Probability that exactly one of `nodes` nodes gets an unerased packet
/// through: `m z (1 - z)^(m - 1)` with `z = zeta (1 - epsilon)`.
///
/// `nodes` may be fractional; the power is evaluated in log space.
pub fn success_prob(nodes: f64, zeta: f64, epsilon: f64) -> f64 {
    let z = zeta * (1.0 - epsilon);
    if nodes <= 0.0 || z <= 0.0 {
        return 0.0;
    }
    if z >= 1.0 {
        return if nodes == 1.0 { 1.0 } else { 0.0 };
    }
    let p = nodes * z * ((nodes - 1.0) * (-z).ln_1p()).exp();
    p.clamp(0.0, 1.0)
}

/// `P(age = delta) = p_s (1 - p_s)^delta`, `delta >= 0`.
pub fn aoi_pmf(p_s: f64, delta: u64) -> Result<f64> {
    check_success_prob(p_s)?;
    Ok(p_s * geometric_tail(p_s, delta))
}

/// `P(age >= delta) = (1 - p_s)^delta`.
pub fn aoi_tail(p_s: f64, delta: u64) -> Result<f64> {
    check_success_prob(p_s)?;
    Ok(geometric_tail(p_s, delta))
}

pub fn aoi_mean(p_s: f64) -> Result<f64> {
    check_success_prob(p_s)?;
    Ok((1.0 - p_s) / p_s)
}

pub(crate) fn check_success_prob(p_s: f64) -> Result<()> {
    if p_s > 0.0 && p_s <= 1.0 {
        Ok(())
    } else if p_s == 0.0 {
        Err(Error::ZeroSuccessProbability)
    } else {
        check(false, "p_s", p_s, "must lie in (0, 1]")
    }
}

pub(crate) fn geometric_tail(p_s: f64, delta: u64) -> f64 {
    if p_s >= 1.0 {
        return if delta == 0 { 1.0 } else { 0.0 };
    }
    (delta as f64 * (-p_s).ln_1p()).exp()
}

/// Coverage radius that puts the channel at unit load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AoiRadius {
    /// `(pi rho zeta (1 - epsilon))^(-1/2)`: solves `m zeta (1 - epsilon) = 1`.
    pub radius: f64,
    /// `(pi rho zeta epsilon)^(-1/2)`, the variant with the erasure
    /// probability in place of its complement. Reported for comparison only.
    pub radius_erasure_variant: f64,
    /// Ring count of the nearest grid radius (at least 1).
    pub grid_rings: usize,
    /// `grid_rings * ring_width`.
    pub grid_radius: f64,
}

pub fn aoi_optimal_radius(density: f64, zeta: f64, epsilon: f64, ring_width: f64) -> Result<AoiRadius> {
    check(density > 0.0, "density", density, "must be positive")?;
    check(zeta > 0.0 && zeta <= 1.0, "zeta", zeta, "must lie in (0, 1]")?;
    check((0.0..1.0).contains(&epsilon), "epsilon", epsilon, "must lie in [0, 1)")?;
    check(ring_width > 0.0, "ring_width", ring_width, "must be positive")?;
    let pi = std::f64::consts::PI;
    let radius = (pi * density * zeta * (1.0 - epsilon)).powf(-0.5);
    let radius_erasure_variant = if epsilon > 0.0 {
        (pi * density * zeta * epsilon).powf(-0.5)
    } else {
        f64::INFINITY
    };
    let grid_rings = ((radius / ring_width).round() as usize).max(1);
    Ok(AoiRadius {
        radius,
        radius_erasure_variant,
        grid_rings,
        grid_radius: grid_rings as f64 * ring_width,
    })
}
