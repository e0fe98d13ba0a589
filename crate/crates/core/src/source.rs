//! Two-state discrete-time Markov source.
//!
//! The chain moves 0 -> 1 with probability `q` and 1 -> 0 with probability
//! `eta * q`. Its second eigenvalue `mu = 1 - q (1 + eta)` gives the
//! distribution after any number of steps in closed form:
//! `p1(t) = pi1 + (p1(0) - pi1) * mu^t`.

use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};

/// Absolute tolerance accepted on `p0 + p1 = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Parameters of the two-state source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSourceParams")]
pub struct SourceParams {
    q: f64,
    eta: f64,
}

#[derive(Deserialize)]
struct RawSourceParams {
    q: f64,
    eta: f64,
}

impl TryFrom<RawSourceParams> for SourceParams {
    type Error = Error;

    fn try_from(raw: RawSourceParams) -> Result<Self> {
        SourceParams::new(raw.q, raw.eta)
    }
}

impl SourceParams {
    /// `q` in `[0, 1]`, `eta > 0`, and `eta * q <= 1` so that every row of the
    /// transition matrix is a distribution.
    pub fn new(q: f64, eta: f64) -> Result<Self> {
        check((0.0..=1.0).contains(&q), "q", q, "must lie in [0, 1]")?;
        check(eta > 0.0, "eta", eta, "must be positive")?;
        check(eta * q <= 1.0, "eta", eta, "eta * q must not exceed 1")?;
        Ok(Self { q, eta })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Row-stochastic one-step matrix, rows indexed by the current state.
    pub fn transition_matrix(&self) -> [[f64; 2]; 2] {
        let q = self.q;
        let back = self.eta * q;
        [[1.0 - q, q], [back, 1.0 - back]]
    }

    pub fn stationary_dist(&self) -> Dist2 {
        let p0 = self.eta / (1.0 + self.eta);
        Dist2 { p0, p1: 1.0 - p0 }
    }

    /// Second eigenvalue of the transition matrix. Negative when
    /// `q (1 + eta) > 1`, in which case distributions oscillate around the
    /// stationary law while converging.
    pub fn second_eigenvalue(&self) -> f64 {
        1.0 - self.q * (1.0 + self.eta)
    }

    /// `mu^steps`, valid for negative `mu`.
    pub fn eigenvalue_power(&self, steps: u64) -> f64 {
        let mu = self.second_eigenvalue();
        let magnitude = if steps <= i32::MAX as u64 {
            mu.abs().powi(steps as i32)
        } else {
            mu.abs().powf(steps as f64)
        };
        if mu < 0.0 && steps % 2 == 1 {
            -magnitude
        } else {
            magnitude
        }
    }

    /// Distribution after `steps` applications of the transition matrix.
    pub fn evolve(&self, dist: Dist2, steps: u64) -> Dist2 {
        if steps == 0 {
            return dist;
        }
        let pi1 = self.stationary_dist().p1;
        let p1 = pi1 + (dist.p1 - pi1) * self.eigenvalue_power(steps);
        Dist2::from_p1(p1.clamp(0.0, 1.0))
    }

    /// Entropy of the stationary law, in bits.
    pub fn stationary_entropy(&self) -> f64 {
        entropy(self.stationary_dist())
    }
}

/// A distribution over the two source states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dist2 {
    pub p0: f64,
    pub p1: f64,
}

impl Dist2 {
    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        check((0.0..=1.0).contains(&p0), "p0", p0, "must lie in [0, 1]")?;
        check((0.0..=1.0).contains(&p1), "p1", p1, "must lie in [0, 1]")?;
        check(
            (p0 + p1 - 1.0).abs() <= NORMALIZATION_TOL,
            "p0 + p1",
            p0 + p1,
            "must sum to 1",
        )?;
        Ok(Self { p0, p1 })
    }

    /// Builds `(1 - p1, p1)`; `p1` must already lie in `[0, 1]`.
    pub fn from_p1(p1: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p1));
        Self { p0: 1.0 - p1, p1 }
    }

    /// Point mass on `state` (0 or 1).
    pub fn point(state: u8) -> Self {
        if state == 0 {
            Self { p0: 1.0, p1: 0.0 }
        } else {
            Self { p0: 0.0, p1: 1.0 }
        }
    }

    pub fn prob(&self, state: u8) -> f64 {
        if state == 0 {
            self.p0
        } else {
            self.p1
        }
    }
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn entropy(dist: Dist2) -> f64 {
    fn term(p: f64) -> f64 {
        if p > 0.0 {
            -p * p.log2()
        } else {
            0.0
        }
    }
    (term(dist.p0) + term(dist.p1)).clamp(0.0, 1.0)
}
