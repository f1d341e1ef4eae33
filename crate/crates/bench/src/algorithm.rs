//! Single estimation runs of any algorithm, reported as one CSV row.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use iqae::baselines::{run_mc, run_mlae, run_qae_mle};
use iqae::confint::{CiMethod, Interval01};
use iqae::iqae::{run_iqae, EstimationResult, IqaeConfig};
use iqae::oracle::{AmplitudeProblem, RandomSource};

use crate::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Iqae,
    Mlae,
    Qae,
    Mc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Iqae, Algorithm::Mlae, Algorithm::Qae, Algorithm::Mc];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Iqae => "iqae",
            Algorithm::Mlae => "mlae",
            Algorithm::Qae => "qae",
            Algorithm::Mc => "mc",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchError::Invalid(format!("unknown algorithm '{s}'")))
    }
}

/// Inputs of one run. `epsilon`, `ci_method` and `min_ratio` apply to IQAE,
/// `m` to MLAE (number of powers) and QAE (ancillas), and `shots` is the
/// sample count for Monte Carlo.
#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub algorithm: Algorithm,
    pub a: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub shots: u64,
    pub ci_method: CiMethod,
    pub min_ratio: f64,
    pub m: u32,
}

impl RunParams {
    pub fn iqae(a: f64, epsilon: f64, alpha: f64, shots: u64) -> Self {
        Self {
            algorithm: Algorithm::Iqae,
            a,
            epsilon,
            alpha,
            shots,
            ci_method: CiMethod::ClopperPearson,
            min_ratio: 2.0,
            m: 0,
        }
    }

    pub fn iqae_config(&self) -> IqaeConfig {
        IqaeConfig::new(self.epsilon, self.alpha, self.shots)
            .with_ci_method(self.ci_method)
            .with_min_ratio(self.min_ratio)
    }
}

/// One estimation, in the column order of the CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub a: f64,
    /// Target half-width; NaN for algorithms without one.
    pub epsilon: f64,
    pub alpha: f64,
    pub seed_index: u64,
    pub n_oracle: u64,
    pub interval_lo: f64,
    pub interval_hi: f64,
    pub covered: bool,
    /// Oracle calls over `ln((2/α) log₃(3π/20ε)) / ε`; NaN without a target.
    pub overhead: f64,
    /// Seconds.
    pub wall_time: f64,
}

impl SweepRow {
    pub const HEADER: [&'static str; 11] = [
        "algorithm",
        "a",
        "epsilon",
        "alpha",
        "seed_index",
        "n_oracle",
        "interval_lo",
        "interval_hi",
        "covered",
        "overhead",
        "wall_time",
    ];

    /// Equality of everything except the wall time.
    pub fn same_outcome(&self, other: &SweepRow) -> bool {
        let same = |x: f64, y: f64| x.to_bits() == y.to_bits();
        self.algorithm == other.algorithm
            && same(self.a, other.a)
            && same(self.epsilon, other.epsilon)
            && same(self.alpha, other.alpha)
            && self.seed_index == other.seed_index
            && self.n_oracle == other.n_oracle
            && same(self.interval_lo, other.interval_lo)
            && same(self.interval_hi, other.interval_hi)
            && self.covered == other.covered
            && same(self.overhead, other.overhead)
    }

    pub fn interval(&self) -> Interval01 {
        Interval01::clipped(self.interval_lo, self.interval_hi)
    }
}

/// Full IQAE result together with its row.
pub fn run_iqae_row(
    params: &RunParams,
    seed_index: u64,
    rng: &mut RandomSource,
) -> Result<(SweepRow, EstimationResult)> {
    let problem = AmplitudeProblem::new(params.a)?;
    let start = Instant::now();
    let res = run_iqae(&params.iqae_config(), &problem, rng)?;
    let wall_time = start.elapsed().as_secs_f64();
    let row = SweepRow {
        algorithm: Algorithm::Iqae,
        a: params.a,
        epsilon: params.epsilon,
        alpha: params.alpha,
        seed_index,
        n_oracle: res.n_oracle,
        interval_lo: res.a_interval.lo(),
        interval_hi: res.a_interval.hi(),
        covered: res.a_interval.contains(params.a),
        overhead: res.overhead(),
        wall_time,
    };
    Ok((row, res))
}

/// Runs `params` once with `rng`.
pub fn run_row(params: &RunParams, seed_index: u64, rng: &mut RandomSource) -> Result<SweepRow> {
    let problem = AmplitudeProblem::new(params.a)?;
    let start = Instant::now();
    let (interval, n_oracle) = match params.algorithm {
        Algorithm::Iqae => return Ok(run_iqae_row(params, seed_index, rng)?.0),
        Algorithm::Mc => {
            let res = run_mc(&problem, params.shots, params.alpha, rng)?;
            (res.interval, res.n_oracle())
        }
        Algorithm::Mlae => {
            let res = run_mlae(&problem, params.m, params.shots, params.alpha, rng)?;
            (res.interval, res.n_oracle)
        }
        Algorithm::Qae => {
            let res = run_qae_mle(&problem, params.m, params.shots, params.alpha, rng)?;
            (res.interval, res.n_oracle)
        }
    };
    Ok(SweepRow {
        algorithm: params.algorithm,
        a: params.a,
        epsilon: f64::NAN,
        alpha: params.alpha,
        seed_index,
        n_oracle,
        interval_lo: interval.lo(),
        interval_hi: interval.hi(),
        covered: interval.contains(params.a),
        overhead: f64::NAN,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
