//! Binomial confidence intervals and likelihood-ratio intervals.
//!
//! Two interval constructions are available for the success probability of a
//! Bernoulli experiment:
//!
//! - **Chernoff**: `â ± √(3 ln(2/α) / N)`, the inversion of the tail bound
//!   `P[|â − a| ≥ ε] ≤ 2 exp(−N ε² / 3)`.
//! - **Clopper-Pearson**: the exact interval obtained by inverting the binomial
//!   tails, computed through quantiles of the beta distribution.
//!
//! Both are clipped to `[0, 1]`.

mod likelihood_ratio;
mod special;

pub use likelihood_ratio::{likelihood_ratio_bounds, likelihood_ratio_interval, LrBounds, LrInterval};
pub use special::{beta_quantile, chi2_quantile_1dof, normal_quantile, regularized_incomplete_beta};

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Shot count and number of observed ones, possibly merged over iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BinomialTally {
    shots: u64,
    ones: u64,
}

impl BinomialTally {
    pub fn new(shots: u64, ones: u64) -> Result<Self> {
        if ones > shots {
            return Err(Error::InvalidTally { shots, ones });
        }
        Ok(Self { shots, ones })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    pub fn zeros(&self) -> u64 {
        self.shots - self.ones
    }

    /// Empirical success frequency; zero for an empty tally.
    pub fn frequency(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.ones as f64 / self.shots as f64
        }
    }

    pub fn merge(&self, other: &BinomialTally) -> BinomialTally {
        BinomialTally {
            shots: self.shots + other.shots,
            ones: self.ones + other.ones,
        }
    }
}

/// Closed sub-interval of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval01 {
    lo: f64,
    hi: f64,
}

impl Interval01 {
    pub const UNIT: Interval01 = Interval01 { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidInterval(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    /// Clips both ends into `[0, 1]` and orders them.
    pub fn clipped(lo: f64, hi: f64) -> Self {
        let lo = lo.clamp(0.0, 1.0);
        let hi = hi.clamp(0.0, 1.0);
        Self {
            lo: lo.min(hi),
            hi: lo.max(hi),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval01) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// How per-round confidence intervals on a success probability are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CiMethod {
    Chernoff,
    #[default]
    ClopperPearson,
}

impl CiMethod {
    pub fn interval(&self, tally: &BinomialTally, alpha: f64) -> Result<Interval01> {
        match self {
            CiMethod::Chernoff => chernoff_interval(tally, alpha),
            CiMethod::ClopperPearson => clopper_pearson_interval(tally, alpha),
        }
    }
}

impl fmt::Display for CiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CiMethod::Chernoff => "chernoff",
            CiMethod::ClopperPearson => "cp",
        })
    }
}

impl FromStr for CiMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chernoff" => Ok(CiMethod::Chernoff),
            "cp" | "clopper-pearson" | "clopper_pearson" => Ok(CiMethod::ClopperPearson),
            other => Err(Error::InvalidConfig(format!("unknown interval method '{other}'"))),
        }
    }
}

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::OpenUnitInterval { name, value })
    }
}

/// Half-width of the Chernoff interval: solves `2 exp(−N ε² / 3) = α` for `ε`.
pub fn chernoff_half_width(shots: u64, alpha: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    Ok((3.0 * (2.0 / alpha).ln() / shots as f64).sqrt())
}

pub fn chernoff_interval(tally: &BinomialTally, alpha: f64) -> Result<Interval01> {
    let half = chernoff_half_width(tally.shots(), alpha)?;
    let center = tally.frequency();
    Ok(Interval01::clipped(center - half, center + half))
}

/// Exact two-sided binomial interval at confidence level `1 − alpha`.
pub fn clopper_pearson_interval(tally: &BinomialTally, alpha: f64) -> Result<Interval01> {
    check_open_unit("alpha", alpha)?;
    if tally.shots() == 0 {
        return Err(Error::ZeroShots);
    }
    let n = tally.shots() as f64;
    let ones = tally.ones() as f64;
    let lo = if tally.ones() == 0 {
        0.0
    } else {
        beta_quantile(alpha / 2.0, ones, n - ones + 1.0)
    };
    let hi = if tally.ones() == tally.shots() {
        1.0
    } else {
        beta_quantile(1.0 - alpha / 2.0, ones + 1.0, n - ones)
    };
    Ok(Interval01::clipped(lo, hi))
}
