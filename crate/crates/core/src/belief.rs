//! Belief of a forgetful receiver that keeps only the last decoded reading
//! `y` and its age `delta`.
//!
//! At reception the posterior over the source state follows from Bayes'
//! rule with the ring-averaged reading reliability `c`; after `delta`
//! silent slots it is that posterior pushed `delta` steps through the
//! chain. The per-state uncertainty `h(y, delta)` is its binary entropy, and
//! the stationary law of `(y, delta)` factorises into the reading marginal
//! times a geometric age.

use serde::{Deserialize, Serialize};

use crate::channel::{check_success_prob, ChannelConfig};
use crate::error::{check, Error, Result};
use crate::source::{entropy, Dist2, SourceParams};
use crate::spatial::{ReliabilityLaw, SpatialConfig};

/// Remaining age mass at which a non-mixing source's age sum stops.
pub const AGE_TAIL_MASS: f64 = 1e-10;

/// Distance from the stationary law past which a belief counts as settled;
/// `h` then equals `H(X)` to well below 1e-12 bit.
pub const BELIEF_SETTLE_TOL: f64 = 1e-14;

/// Hard cap on the number of enumerated ages.
pub const MAX_AGE_TERMS: u64 = 10_000_000;

/// What the receiver knows at a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReceiverState {
    /// Nothing decoded yet; the belief is the stationary law.
    Unreached,
    /// Last decoded reading and the slots elapsed since it arrived.
    Tracking { reading: u8, age: u64 },
}

impl ReceiverState {
    /// State after a slot: a decoded reading resets the age, otherwise it grows.
    pub fn advance(self, decoded: Option<u8>) -> Self {
        match (decoded, self) {
            (Some(reading), _) => ReceiverState::Tracking { reading, age: 0 },
            (None, ReceiverState::Tracking { reading, age }) => ReceiverState::Tracking {
                reading,
                age: age + 1,
            },
            (None, ReceiverState::Unreached) => ReceiverState::Unreached,
        }
    }
}

/// `c = sum_d (2d + 1) / K^2 * lambda(d)`: probability that a decoded
/// reading is correct, averaged over the sender's ring.
pub fn aggregate_correct_prob(spatial: &SpatialConfig) -> f64 {
    aggregate_correct_prob_with(spatial, &spatial.power_law())
}

pub fn aggregate_correct_prob_with<L: ReliabilityLaw + ?Sized>(spatial: &SpatialConfig, law: &L) -> f64 {
    let width = spatial.ring_width();
    spatial
        .region_pmf()
        .iter()
        .enumerate()
        .map(|(d, w)| w * law.reliability(d, width))
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

fn check_reading(y: u8) -> Result<()> {
    check(y <= 1, "reading", y as f64, "must be 0 or 1")
}

fn check_correct_prob(c: f64) -> Result<()> {
    check((0.0..=1.0).contains(&c), "c", c, "must lie in [0, 1]")
}

/// `p(x | y, age 0)`, with `p(y | x) = c` when `x = y` and `1 - c` otherwise.
pub fn posterior_at_reception(source: &SourceParams, c: f64, y: u8) -> Result<Dist2> {
    check_reading(y)?;
    check_correct_prob(c)?;
    let pi = source.stationary_dist();
    let like = |x: u8| if x == y { c } else { 1.0 - c };
    let joint0 = like(0) * pi.p0;
    let joint1 = like(1) * pi.p1;
    let norm = joint0 + joint1;
    check(norm > 0.0, "p(y)", norm, "reading has zero probability")?;
    Ok(Dist2::from_p1((joint1 / norm).clamp(0.0, 1.0)))
}

/// `p(y) = c pi_y + (1 - c) pi_{1-y}`.
pub fn reading_marginal(source: &SourceParams, c: f64) -> Result<Dist2> {
    check_correct_prob(c)?;
    let pi = source.stationary_dist();
    let p1 = c * pi.p1 + (1.0 - c) * pi.p0;
    Ok(Dist2::from_p1(p1.clamp(0.0, 1.0)))
}

/// `h(y, delta)` in bits.
pub fn conditional_entropy_h(source: &SourceParams, c: f64, y: u8, delta: u64) -> Result<f64> {
    let post = posterior_at_reception(source, c, y)?;
    Ok(entropy(source.evolve(post, delta)))
}

/// Quantities that do not depend on the age.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefTable {
    /// Indexed by the reading. Entries for readings of zero probability
    /// (only possible with `c` in `{0, 1}` and a degenerate prior) fall back
    /// to the stationary law.
    pub reset_posterior: [Dist2; 2],
    pub reading_marginal: Dist2,
    pub correct_prob: f64,
}

impl BeliefTable {
    pub fn new(source: &SourceParams, c: f64) -> Result<Self> {
        let marginal = reading_marginal(source, c)?;
        let post = |y: u8| -> Result<Dist2> {
            if marginal.prob(y) > 0.0 {
                posterior_at_reception(source, c, y)
            } else {
                Ok(source.stationary_dist())
            }
        };
        Ok(Self {
            reset_posterior: [post(0)?, post(1)?],
            reading_marginal: marginal,
            correct_prob: c,
        })
    }
}

/// The analytical model at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverModel {
    source: SourceParams,
    table: BeliefTable,
    success_prob: f64,
    stationary_entropy: f64,
}

/// A `(y, delta)` pair's uncertainty and stationary probability.
#[derive(Debug, Clone, Copy, PartialEq)]
struct AgeTerm {
    h: f64,
    mass: f64,
}

impl ReceiverModel {
    pub fn new(source: SourceParams, spatial: &SpatialConfig, channel: &ChannelConfig) -> Result<Self> {
        let c = aggregate_correct_prob(spatial);
        let p_s = channel.success_prob(spatial.node_count().expected);
        Self::from_parts(source, c, p_s)
    }

    /// Model with an explicit correct-reading probability and success
    /// probability. `p_s` may be zero; age-averaged quantities then fail.
    pub fn from_parts(source: SourceParams, c: f64, p_s: f64) -> Result<Self> {
        check((0.0..=1.0).contains(&p_s), "p_s", p_s, "must lie in [0, 1]")?;
        Ok(Self {
            source,
            table: BeliefTable::new(&source, c)?,
            success_prob: p_s,
            stationary_entropy: source.stationary_entropy(),
        })
    }

    pub fn source(&self) -> &SourceParams {
        &self.source
    }

    pub fn table(&self) -> &BeliefTable {
        &self.table
    }

    pub fn correct_prob(&self) -> f64 {
        self.table.correct_prob
    }

    pub fn success_prob(&self) -> f64 {
        self.success_prob
    }

    /// `H(X)` of the source.
    pub fn stationary_entropy(&self) -> f64 {
        self.stationary_entropy
    }

    /// Belief about the current state.
    pub fn belief(&self, state: ReceiverState) -> Dist2 {
        match state {
            ReceiverState::Unreached => self.source.stationary_dist(),
            ReceiverState::Tracking { reading, age } => self
                .source
                .evolve(self.table.reset_posterior[reading.min(1) as usize], age),
        }
    }

    /// Uncertainty in bits; `H(X)` before the first reception.
    pub fn uncertainty(&self, state: ReceiverState) -> f64 {
        match state {
            ReceiverState::Unreached => self.stationary_entropy,
            _ => entropy(self.belief(state)),
        }
    }

    /// `h(y, delta)`.
    pub fn h(&self, y: u8, delta: u64) -> Result<f64> {
        check_reading(y)?;
        Ok(self.uncertainty(ReceiverState::Tracking { reading: y, age: delta }))
    }

    /// Last age enumerated explicitly; the remaining age mass is charged
    /// `H(X)`.
    ///
    /// When the chain mixes, this is the first age at which every reset
    /// belief lies within [`BELIEF_SETTLE_TOL`] of the stationary law, so
    /// the charge is exact to well below 1e-12 bit whatever `p_s` is.
    /// Otherwise (`|mu| = 1`, or mixing slower than [`MAX_AGE_TERMS`]) it is
    /// the first age whose remaining mass is below [`AGE_TAIL_MASS`].
    pub fn age_cutoff(&self) -> Result<u64> {
        let p_s = self.success_prob;
        check_success_prob(p_s)?;

        let pi1 = self.source.stationary_dist().p1;
        let spread = self
            .table
            .reset_posterior
            .iter()
            .map(|d| (d.p1 - pi1).abs())
            .fold(0.0, f64::max);
        let mu = self.source.second_eigenvalue().abs();
        let by_settling = if spread <= BELIEF_SETTLE_TOL {
            0.0
        } else if mu == 0.0 {
            1.0
        } else if mu < 1.0 {
            ((BELIEF_SETTLE_TOL / spread).ln() / mu.ln()).ceil().max(0.0)
        } else {
            f64::INFINITY
        };
        if by_settling < MAX_AGE_TERMS as f64 {
            return Ok(by_settling as u64);
        }

        let by_mass = if p_s >= 1.0 {
            0.0
        } else {
            // smallest delta with (1 - p_s)^(delta + 1) < AGE_TAIL_MASS
            let per_slot = (-p_s).ln_1p();
            let mut d = ((AGE_TAIL_MASS.ln() / per_slot).ceil() - 1.0).max(0.0);
            while d > 0.0 && (d * per_slot).exp() < AGE_TAIL_MASS {
                d -= 1.0;
            }
            while ((d + 1.0) * per_slot).exp() >= AGE_TAIL_MASS {
                d += 1.0;
            }
            d
        };
        if by_mass >= MAX_AGE_TERMS as f64 {
            return Err(Error::NonConvergentTruncation(MAX_AGE_TERMS));
        }
        Ok(by_mass as u64)
    }

    /// Walks every `(y, delta)` up to the cutoff, then returns the leftover
    /// age mass.
    fn for_each_term(&self, mut visit: impl FnMut(AgeTerm)) -> Result<f64> {
        let cutoff = self.age_cutoff()?;
        let p_s = self.success_prob;
        let pi1 = self.source.stationary_dist().p1;
        let mu = self.source.second_eigenvalue();
        let marginal = self.table.reading_marginal;
        let start = self.table.reset_posterior.map(|d| d.p1 - pi1);

        let mut age_mass = p_s;
        let mut mu_pow = 1.0;
        for _ in 0..=cutoff {
            for y in 0..2u8 {
                let py = marginal.prob(y);
                if py == 0.0 {
                    continue;
                }
                let p1 = (pi1 + start[y as usize] * mu_pow).clamp(0.0, 1.0);
                visit(AgeTerm {
                    h: entropy(Dist2::from_p1(p1)),
                    mass: py * age_mass,
                });
            }
            age_mass *= 1.0 - p_s;
            mu_pow *= mu;
        }
        Ok(crate::channel::geometric_tail(p_s, cutoff + 1))
    }

    /// `H(X_n | Y_n, Delta_n)` in bits.
    pub fn avg_conditional_entropy(&self) -> Result<f64> {
        let mut acc = 0.0;
        let tail = self.for_each_term(|t| acc += t.h * t.mass)?;
        Ok((acc + tail * self.stationary_entropy).clamp(0.0, 1.0))
    }

    /// Stationary distribution of `h(y, delta)` as sorted atoms.
    pub fn uncertainty_distribution(&self) -> Result<UncertaintyDistribution> {
        let mut atoms = Vec::new();
        let tail = self.for_each_term(|t| atoms.push((t.h, t.mass)))?;
        if tail > 0.0 {
            atoms.push((self.stationary_entropy, tail));
        }
        Ok(UncertaintyDistribution::from_atoms(atoms))
    }

    /// `P(h(y, delta) <= w)` for each threshold.
    pub fn uncertainty_cdf(&self, thresholds: &[f64]) -> Result<Vec<f64>> {
        let dist = self.uncertainty_distribution()?;
        Ok(thresholds.iter().map(|&w| dist.cdf(w)).collect())
    }

    /// Smallest `h(y, 0)` over readings with positive probability.
    pub fn min_reset_uncertainty(&self) -> f64 {
        (0..2u8)
            .filter(|&y| self.table.reading_marginal.prob(y) > 0.0)
            .map(|y| entropy(self.table.reset_posterior[y as usize]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Discrete law of the receiver's uncertainty: atoms `(h, mass)` sorted by `h`
/// with equal values merged.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyDistribution {
    values: Vec<f64>,
    cumulative: Vec<f64>,
    masses: Vec<f64>,
}

impl UncertaintyDistribution {
    pub fn from_atoms(mut atoms: Vec<(f64, f64)>) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut masses: Vec<f64> = Vec::with_capacity(atoms.len());
        for (h, m) in atoms {
            if m <= 0.0 {
                continue;
            }
            match values.last() {
                Some(&last) if last == h => *masses.last_mut().unwrap() += m,
                _ => {
                    values.push(h);
                    masses.push(m);
                }
            }
        }
        let mut running = 0.0;
        let cumulative = masses
            .iter()
            .map(|m| {
                running += m;
                running
            })
            .collect();
        Self {
            values,
            cumulative,
            masses,
        }
    }

    /// `P(h <= w)`.
    pub fn cdf(&self, w: f64) -> f64 {
        let idx = self.values.partition_point(|&h| h <= w);
        if idx == 0 {
            0.0
        } else if idx == self.values.len() {
            1.0
        } else {
            self.cumulative[idx - 1].min(1.0)
        }
    }

    /// Smallest uncertainty with positive probability.
    pub fn min_support(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.masses).map(|(h, m)| h * m).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.masses.iter().copied())
    }
}
