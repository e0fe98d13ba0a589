//! Coverage geometry: a disc of radius `K * R` split into `K` annuli of
//! width `R`, populated uniformly with density `rho`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};

/// Probability that a sensor in a given ring reports the true state.
pub trait ReliabilityLaw {
    fn reliability(&self, ring: usize, ring_width: f64) -> f64;
}

/// `lambda(d) = (1 + d R)^(-alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub alpha: f64,
}

impl ReliabilityLaw for PowerLaw {
    fn reliability(&self, ring: usize, ring_width: f64) -> f64 {
        (1.0 + ring as f64 * ring_width).powf(-self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpatialConfig")]
pub struct SpatialConfig {
    ring_width: f64,
    num_rings: usize,
    density: f64,
    alpha: f64,
}

#[derive(Deserialize)]
struct RawSpatialConfig {
    ring_width: f64,
    num_rings: usize,
    density: f64,
    alpha: f64,
}

impl TryFrom<RawSpatialConfig> for SpatialConfig {
    type Error = Error;

    fn try_from(raw: RawSpatialConfig) -> Result<Self> {
        SpatialConfig::new(raw.ring_width, raw.num_rings, raw.density, raw.alpha)
    }
}

/// Population of the coverage area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeCount {
    /// `rho * pi * R_m^2`, used by the analysis.
    pub expected: f64,
    /// Nearest integer, used by the simulator. Zero means nothing to simulate.
    pub rounded: usize,
}

impl NodeCount {
    pub fn for_simulation(&self) -> Result<usize> {
        if self.rounded == 0 {
            Err(Error::NoNodes(self.expected))
        } else {
            Ok(self.rounded)
        }
    }
}

impl SpatialConfig {
    pub fn new(ring_width: f64, num_rings: usize, density: f64, alpha: f64) -> Result<Self> {
        check(ring_width > 0.0, "ring_width", ring_width, "must be positive")?;
        check(num_rings >= 1, "num_rings", num_rings as f64, "must be at least 1")?;
        check(density > 0.0, "density", density, "must be positive")?;
        check(alpha >= 0.0, "alpha", alpha, "must be non-negative")?;
        Ok(Self {
            ring_width,
            num_rings,
            density,
            alpha,
        })
    }

    pub fn ring_width(&self) -> f64 {
        self.ring_width
    }

    pub fn num_rings(&self) -> usize {
        self.num_rings
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same geometry with a different number of rings.
    pub fn with_num_rings(&self, num_rings: usize) -> Result<Self> {
        Self::new(self.ring_width, num_rings, self.density, self.alpha)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.ring_width, self.num_rings, self.density, alpha)
    }

    /// `R_m = K * R`.
    pub fn coverage_radius(&self) -> f64 {
        self.num_rings as f64 * self.ring_width
    }

    pub fn node_count(&self) -> NodeCount {
        let r = self.coverage_radius();
        let expected = self.density * std::f64::consts::PI * r * r;
        NodeCount {
            expected,
            rounded: expected.round() as usize,
        }
    }

    /// Probability that a uniformly placed node falls in ring `d`:
    /// `(2d + 1) / K^2`.
    pub fn region_pmf(&self) -> Vec<f64> {
        let k2 = (self.num_rings * self.num_rings) as f64;
        (0..self.num_rings)
            .map(|d| (2 * d + 1) as f64 / k2)
            .collect()
    }

    pub fn power_law(&self) -> PowerLaw {
        PowerLaw { alpha: self.alpha }
    }

    /// Reading reliability of ring `ring` under the configured power law.
    pub fn reliability(&self, ring: usize) -> Result<f64> {
        self.reliability_with(&self.power_law(), ring)
    }

    pub fn reliability_with<L: ReliabilityLaw + ?Sized>(&self, law: &L, ring: usize) -> Result<f64> {
        if ring >= self.num_rings {
            return Err(Error::RegionOutOfRange {
                index: ring,
                num_rings: self.num_rings,
            });
        }
        Ok(law.reliability(ring, self.ring_width))
    }

    /// Draws a uniform position in the disc and returns its ring index.
    /// The radius is `R_m sqrt(U)`, so the ring is `floor(K sqrt(U))`.
    pub fn sample_region<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let ring = (self.num_rings as f64 * u.sqrt()) as usize;
        ring.min(self.num_rings - 1)
    }
}
