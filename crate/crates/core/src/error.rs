use thiserror::Error;

/// Errors raised by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("region index {index} out of range for {num_rings} rings")]
    RegionOutOfRange { index: usize, num_rings: usize },

    #[error("success probability is zero: the age of information has no stationary law")]
    ZeroSuccessProbability,

    #[error("coverage area holds no node (m = {0:.4}) and cannot be simulated")]
    NoNodes(f64),

    #[error("age truncation did not converge within {0} slots")]
    NonConvergentTruncation(u64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
