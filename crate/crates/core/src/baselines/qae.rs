use std::f64::consts::{FRAC_PI_2, PI};

use super::floored_ln;
use super::optimize::golden_section_max;
use crate::confint::{check_open_unit, likelihood_ratio_bounds, Interval01};
use crate::oracle::{fejer_kernel, fold_counts, fold_outcome, AmplitudeProblem, QpeSampler, MAX_ANCILLAS};
use crate::{Error, Result};

const REFINE_TOL: f64 = 1e-12;
/// Likelihood-ratio scan nodes per grid cell of width `π/M`.
const LR_NODES_PER_CELL: usize = 10;
const LR_MIN_NODES: usize = 1001;

/// Ancilla readouts of canonical amplitude estimation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaeSampleSet {
    m: u32,
    counts: Vec<u64>,
}

impl QaeSampleSet {
    /// `counts[y]` for `y ∈ {0, …, 2^m − 1}`.
    pub fn new(m: u32, counts: Vec<u64>) -> Result<Self> {
        if !(1..=MAX_ANCILLAS).contains(&m) {
            return Err(Error::AncillaCount(m, 1, MAX_ANCILLAS));
        }
        if counts.len() as u64 != 1u64 << m {
            return Err(Error::InvalidConfig(format!(
                "expected {} outcome counts for m = {m}, got {}",
                1u64 << m,
                counts.len()
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::ZeroShots);
        }
        Ok(Self { m, counts })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn big_m(&self) -> u64 {
        1u64 << self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts over folded outcomes `ỹ = min(y, M − y) ∈ {0, …, M/2}`.
    pub fn folded_counts(&self) -> Vec<u64> {
        fold_counts(&self.counts)
    }

    /// Lower median of the folded outcomes.
    pub fn median_folded(&self) -> u64 {
        let folded = self.folded_counts();
        let target = self.n_shots().div_ceil(2);
        let mut seen = 0;
        for (y, &c) in folded.iter().enumerate() {
            seen += c;
            if seen >= target {
                return y as u64;
            }
        }
        (folded.len() - 1) as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaeResult {
    /// `sin²(π ỹ_med / M)` for the median folded readout.
    pub grid_estimate: f64,
    pub median_index: u64,
    /// Maximum likelihood estimate `sin²(θ̂)`.
    pub mle_estimate: f64,
    pub theta_mle: f64,
    /// Likelihood-ratio interval at level `1 − α`.
    pub interval: Interval01,
    pub clamped: (bool, bool),
    pub samples: QaeSampleSet,
    /// Grover applications `n_shots · (M − 1)`.
    pub n_oracle: u64,
}

fn likelihood_at_angle(folded_index: u64, theta: f64, big_m: u64) -> f64 {
    let mf = big_m as f64;
    let x = folded_index as f64 / mf;
    let c = theta / PI;
    let near = fejer_kernel(x - c, mf);
    if folded_index == 0 || 2 * folded_index == big_m {
        near
    } else {
        near + fejer_kernel(x + c, mf)
    }
}

/// Probability that a readout folds onto grid index `x_grid_index` when the
/// amplitude is `a_prime`: the phase-estimation probability of `ỹ` plus that
/// of its mirror `M − ỹ`, which coincide for `ỹ ∈ {0, M/2}`.
pub fn qae_likelihood(x_grid_index: u64, a_prime: f64, m: u32) -> Result<f64> {
    if !(1..=MAX_ANCILLAS).contains(&m) {
        return Err(Error::AncillaCount(m, 1, MAX_ANCILLAS));
    }
    let problem = AmplitudeProblem::new(a_prime)?;
    let big_m = 1u64 << m;
    let folded = fold_outcome(x_grid_index % big_m, big_m);
    Ok(likelihood_at_angle(folded, problem.theta_a(), big_m))
}

/// Log-likelihood of the folded readouts as a function of `θ ∈ [0, π/2]`.
pub fn qae_loglik(theta: f64, samples: &QaeSampleSet) -> f64 {
    let big_m = samples.big_m();
    samples
        .folded_counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(y, &c)| c as f64 * floored_ln(likelihood_at_angle(y as u64, theta, big_m)))
        .sum()
}

pub fn run_qae_mle<S>(
    problem: &AmplitudeProblem,
    m: u32,
    n_shots: u64,
    alpha: f64,
    sampler: &mut S,
) -> Result<QaeResult>
where
    S: QpeSampler + ?Sized,
{
    check_open_unit("alpha", alpha)?;
    let counts = sampler.sample_qpe(problem.theta_a(), m, n_shots)?;
    qae_estimate(QaeSampleSet::new(m, counts)?, alpha)
}

/// Grid estimate, maximum likelihood estimate and likelihood-ratio interval.
///
/// The likelihood is maximized by golden-section search over the grid cells
/// `[π(ỹ − 1)/M, π ỹ/M]` and `[π ỹ/M, π(ỹ + 1)/M]` around the median readout
/// `ỹ`; only one cell exists when `ỹ` is `0` or `M/2`.
pub fn qae_estimate(samples: QaeSampleSet, alpha: f64) -> Result<QaeResult> {
    check_open_unit("alpha", alpha)?;
    let big_m = samples.big_m();
    let mf = big_m as f64;
    let median = samples.median_folded();
    let theta_grid = PI * median as f64 / mf;
    let sin2 = |x: f64| x.sin().powi(2);

    // Folded counts are computed once; the closure only evaluates kernels.
    let folded: Vec<(u64, f64)> = samples
        .folded_counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(y, &c)| (y as u64, c as f64))
        .collect();
    let loglik = |theta: f64| -> f64 {
        folded
            .iter()
            .map(|&(y, c)| c * floored_ln(likelihood_at_angle(y, theta, big_m)))
            .sum()
    };

    let cell = PI / mf;
    let mut best = (theta_grid, loglik(theta_grid));
    if median > 0 {
        let cand = golden_section_max(&loglik, theta_grid - cell, theta_grid, REFINE_TOL);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    if 2 * median < big_m {
        let hi = (theta_grid + cell).min(FRAC_PI_2);
        let cand = golden_section_max(&loglik, theta_grid, hi, REFINE_TOL);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    let theta_mle = best.0.clamp(0.0, FRAC_PI_2);
    if !best.1.is_finite() {
        return Err(Error::NonFiniteLikelihood(theta_mle));
    }

    let grid_n = (LR_NODES_PER_CELL * (big_m as usize / 2) + 1).max(LR_MIN_NODES);
    let bounds = likelihood_ratio_bounds(loglik, theta_mle, alpha, 0.0, FRAC_PI_2, grid_n)?;

    Ok(QaeResult {
        grid_estimate: sin2(theta_grid),
        median_index: median,
        mle_estimate: sin2(theta_mle),
        theta_mle,
        interval: Interval01::clipped(sin2(bounds.lo), sin2(bounds.hi)),
        clamped: (bounds.clamped_lo, bounds.clamped_hi),
        n_oracle: samples.n_shots() * (big_m - 1),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{NoiselessOracle, RandomSource};

    #[test]
    fn likelihood_on_grid_point_is_one() {
        for m in [2u32, 3, 5] {
            let big_m = 1u64 << m;
            for y in 0..=big_m / 2 {
                let a = (PI * y as f64 / big_m as f64).sin().powi(2);
                let own = qae_likelihood(y, a, m).unwrap();
                assert!((own - 1.0).abs() < 1e-12, "m={m} y={y} {own}");
            }
        }
    }

    #[test]
    fn likelihood_sums_to_one() {
        for m in [1u32, 3, 6] {
            for a in [0.0, 0.013, 0.3, 0.5, 0.77, 1.0] {
                let total: f64 = (0..=(1u64 << m) / 2).map(|y| qae_likelihood(y, a, m).unwrap()).sum();
                assert!((total - 1.0).abs() < 1e-10, "m={m} a={a} {total}");
            }
        }
    }

    #[test]
    fn mirror_indices_share_likelihood() {
        let m = 4;
        for y in 1..8u64 {
            let l = qae_likelihood(y, 0.37, m).unwrap();
            let r = qae_likelihood(16 - y, 0.37, m).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn lower_median_of_folded_outcomes() {
        // M = 8: readouts 1, 3, 5, 6 fold to 1, 3, 3, 2 → lower median 2.
        let set = QaeSampleSet::new(3, vec![0, 1, 0, 1, 0, 1, 1, 0]).unwrap();
        assert_eq!(set.folded_counts(), vec![0, 1, 1, 2, 0]);
        assert_eq!(set.median_folded(), 2);
        let set = QaeSampleSet::new(3, vec![0, 2, 1, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(set.median_folded(), 1);
    }

    #[test]
    fn sample_set_validation() {
        assert!(QaeSampleSet::new(3, vec![1; 7]).is_err());
        assert!(QaeSampleSet::new(0, vec![1]).is_err());
        assert!(QaeSampleSet::new(2, vec![0; 4]).is_err());
    }

    #[test]
    fn noiseless_mle_is_exact() {
        // Rounding expected counts to integers shifts the MLE by O(1/n).
        for (a, n) in [(0.3, 100_000), (0.1, 1_000_000), (0.62, 1_000_000)] {
            let p = AmplitudeProblem::new(a).unwrap();
            let res = run_qae_mle(&p, 3, n, 0.05, &mut NoiselessOracle).unwrap();
            assert!((res.mle_estimate - a).abs() < 1e-6, "a={a} {}", res.mle_estimate);
        }
    }

    #[test]
    fn degenerate_samples_use_one_sided_search() {
        let mut counts = vec![0u64; 8];
        counts[0] = 20;
        let res = qae_estimate(QaeSampleSet::new(3, counts).unwrap(), 0.05).unwrap();
        assert_eq!(res.grid_estimate, 0.0);
        assert!(res.mle_estimate < 1e-9);

        let mut counts = vec![0u64; 8];
        counts[4] = 20;
        let res = qae_estimate(QaeSampleSet::new(3, counts).unwrap(), 0.05).unwrap();
        assert!((res.mle_estimate - 1.0).abs() < 1e-9);
    }

    #[test]
    fn accounting_and_interval() {
        let p = AmplitudeProblem::new(0.3).unwrap();
        let res = run_qae_mle(&p, 4, 50, 0.05, &mut RandomSource::new(5)).unwrap();
        assert_eq!(res.n_oracle, 50 * 15);
        assert!(res.interval.contains(res.mle_estimate));
    }
}
