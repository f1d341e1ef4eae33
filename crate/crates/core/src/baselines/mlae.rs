use std::f64::consts::FRAC_PI_2;

use super::floored_ln;
use super::optimize::grid_refined_max;
use crate::confint::{check_open_unit, likelihood_ratio_bounds, BinomialTally, Interval01};
use crate::oracle::{AmplitudeProblem, GroverSampler};
use crate::{Error, Result};

/// Grid size used for the likelihood scan unless oscillations demand more.
pub const MLAE_DEFAULT_GRID: usize = 100_000;

/// Largest schedule length accepted by [`run_mlae`].
const MAX_POWERS: u32 = 20;
/// Oscillation periods below this many grid steps trigger a finer grid.
const MIN_STEPS_PER_PERIOD: f64 = 3.0;
/// Grid nodes per oscillation period after refinement.
const REFINED_STEPS_PER_PERIOD: f64 = 10.0;
/// Grid local maxima refined by golden-section search.
const REFINED_PEAKS: usize = 8;
const REFINE_TOL: f64 = 1e-12;

/// Grover power `k` and its measurement tally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleRecord {
    pub k: u64,
    pub tally: BinomialTally,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlaeResult {
    /// `sin²(θ̂)`.
    pub estimate: f64,
    pub theta_hat: f64,
    /// Likelihood-ratio interval at level `1 − α`.
    pub interval: Interval01,
    /// The level set reached `θ = 0` or `θ = π/2`.
    pub clamped: (bool, bool),
    pub records: Vec<ScheduleRecord>,
    /// Grover applications `n_shots · (2^m − 1)`.
    pub n_oracle: u64,
    pub grid_n: usize,
    pub warnings: Vec<String>,
}

/// `Σ_j h_j ln sin²((2k_j + 1)θ) + (N_j − h_j) ln cos²((2k_j + 1)θ)`.
pub fn mlae_loglik(theta: f64, records: &[ScheduleRecord]) -> f64 {
    records
        .iter()
        .map(|r| {
            let x = (2 * r.k + 1) as f64 * theta;
            let (s, c) = x.sin_cos();
            let ones = r.tally.ones() as f64;
            let zeros = r.tally.zeros() as f64;
            let mut v = 0.0;
            if ones > 0.0 {
                v += ones * floored_ln(s * s);
            }
            if zeros > 0.0 {
                v += zeros * floored_ln(c * c);
            }
            v
        })
        .sum()
}

/// Samples `n_shots` at each `k_j = 2^j`, `j < m`, and maximizes the joint
/// likelihood.
pub fn run_mlae<S>(problem: &AmplitudeProblem, m: u32, n_shots: u64, alpha: f64, sampler: &mut S) -> Result<MlaeResult>
where
    S: GroverSampler + ?Sized,
{
    if m == 0 || m > MAX_POWERS {
        return Err(Error::InvalidConfig(format!(
            "schedule length m must lie in 1..={MAX_POWERS}, got {m}"
        )));
    }
    check_open_unit("alpha", alpha)?;
    let records = (0..m)
        .map(|j| {
            let k = 1u64 << j;
            Ok(ScheduleRecord {
                k,
                tally: sampler.sample_grover(problem, k, n_shots)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    mlae_estimate(records, alpha, MLAE_DEFAULT_GRID)
}

/// Maximum likelihood estimate and likelihood-ratio interval from recorded
/// tallies.
pub fn mlae_estimate(records: Vec<ScheduleRecord>, alpha: f64, grid_n: usize) -> Result<MlaeResult> {
    check_open_unit("alpha", alpha)?;
    let k_max = records
        .iter()
        .map(|r| r.k)
        .max()
        .ok_or_else(|| Error::InvalidConfig("no schedule records".into()))?;
    if records.iter().any(|r| r.tally.shots() == 0) {
        return Err(Error::ZeroShots);
    }

    let mut warnings = Vec::new();
    let mut grid_n = grid_n.max(2);
    let big_k = (2 * k_max + 1) as f64;
    // sin²(Kθ) has period π/K; the grid step on [0, π/2] is (π/2)/(n − 1).
    let steps_per_period = 2.0 * (grid_n - 1) as f64 / big_k;
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        let refined = (REFINED_STEPS_PER_PERIOD * big_k / 2.0).ceil() as usize + 1;
        warnings.push(format!(
            "likelihood period spans {steps_per_period:.2} grid steps; grid refined from {grid_n} to {refined} points"
        ));
        grid_n = refined;
    }

    let loglik = |theta: f64| mlae_loglik(theta, &records);
    let (theta_hat, peak) = grid_refined_max(&loglik, 0.0, FRAC_PI_2, grid_n, REFINED_PEAKS, REFINE_TOL);
    if !peak.is_finite() {
        return Err(Error::NonFiniteLikelihood(theta_hat));
    }
    let bounds = likelihood_ratio_bounds(loglik, theta_hat, alpha, 0.0, FRAC_PI_2, grid_n)?;
    let sin2 = |x: f64| x.sin().powi(2);
    let n_oracle = records.iter().map(|r| r.k * r.tally.shots()).sum();

    Ok(MlaeResult {
        estimate: sin2(theta_hat),
        theta_hat,
        interval: Interval01::clipped(sin2(bounds.lo), sin2(bounds.hi)),
        clamped: (bounds.clamped_lo, bounds.clamped_hi),
        records,
        n_oracle,
        grid_n,
        warnings,
    })
}
