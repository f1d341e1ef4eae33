//! Iterative amplitude estimation.
//!
//! The estimator keeps a confidence interval `[θ_l, θ_u]` for `θ_a`. Each
//! iteration picks the largest Grover power `k` (scale `K = 4k + 2`) for which
//! `[K θ_l, K θ_u]` falls in one half-plane modulo 2π, measures `n_shots`
//! times, builds a confidence interval for `sin²((2k + 1) θ_a)` at level
//! `1 − α/T` and inverts `a = (1 − cos(K θ))/2` on the known half-plane to
//! shrink `[θ_l, θ_u]`. Iterations sharing the same `k` form a round and
//! their tallies are merged. The loop stops once `θ_u − θ_l ≤ 2ε`.
//!
//! ```
//! use iqae::iqae::{run_iqae, IqaeConfig};
//! use iqae::oracle::{AmplitudeProblem, RandomSource};
//!
//! let config = IqaeConfig::new(1e-3, 0.05, 100);
//! let problem = AmplitudeProblem::new(0.3).unwrap();
//! let result = run_iqae(&config, &problem, &mut RandomSource::new(7)).unwrap();
//! assert!(result.a_interval.width() <= 2e-3);
//! ```

mod bounds;
mod schedule;

pub use bounds::{
    log_factor, max_growth_ratio, max_rounds, n_max, n_max_constant, n_max_real, oracle_call_bound, overhead_factor,
    ORACLE_BOUND_CONSTANT, SECTOR_HALF_WIDTH,
};
pub use schedule::{find_next_k, invert_to_scaled_angle, scale_factor, update_theta_interval, AngleInterval};

use std::f64::consts::PI;

use crate::confint::{BinomialTally, CiMethod, Interval01};
use crate::oracle::{AmplitudeProblem, GroverSampler};
use crate::{Error, Result};

/// Extra iterations tolerated beyond the worst-case count before aborting.
const ITERATION_MARGIN: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct IqaeConfig {
    /// Target half-width of the returned interval on `a`.
    pub epsilon: f64,
    /// Overall failure probability.
    pub alpha: f64,
    /// Measurements per iteration.
    pub n_shots: u64,
    pub ci_method: CiMethod,
    /// Minimum growth `K_{i+1}/K_i` demanded of a new power.
    pub min_ratio: f64,
    pub seed: u64,
    /// Intersect every update with the previous interval and count the
    /// updates that were not nested.
    pub strict: bool,
}

impl IqaeConfig {
    pub fn new(epsilon: f64, alpha: f64, n_shots: u64) -> Self {
        Self {
            epsilon,
            alpha,
            n_shots,
            ci_method: CiMethod::ClopperPearson,
            min_ratio: 2.0,
            seed: 0,
            strict: false,
        }
    }

    pub fn with_ci_method(mut self, method: CiMethod) -> Self {
        self.ci_method = method;
        self
    }

    pub fn with_min_ratio(mut self, r: f64) -> Self {
        self.min_ratio = r;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < PI / 8.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, pi/8), got {}",
                self.epsilon
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::OpenUnitInterval {
                name: "alpha",
                value: self.alpha,
            });
        }
        if self.n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        if !self.min_ratio.is_finite() || self.min_ratio <= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "minimum growth ratio must exceed 1, got {}",
                self.min_ratio
            )));
        }
        Ok(())
    }

    /// Round bound `T` used to split the failure probability.
    pub fn max_rounds(&self) -> u32 {
        max_rounds(self.epsilon, self.min_ratio)
    }

    /// Per-round failure probability `α / T`.
    pub fn alpha_per_round(&self) -> f64 {
        self.alpha / self.max_rounds() as f64
    }
}

/// One pass of the main loop.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Grover power used.
    pub k: u64,
    /// `K = 4k + 2`.
    pub big_k: u64,
    /// Half-plane of the scaled interval: `[0, π]` when true.
    pub up: bool,
    /// Round index, starting at 0; iterations of a round share `k`.
    pub round: usize,
    /// Tally merged over every iteration of the round so far.
    pub tally: BinomialTally,
    /// Confidence interval on `sin²((2k + 1) θ_a)` from the merged tally.
    pub a_interval: Interval01,
    /// Interval on `θ_a` after the update.
    pub theta_interval: AngleInterval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    /// `[sin²(θ_l), sin²(θ_u)]`.
    pub a_interval: Interval01,
    /// Midpoint of `a_interval`.
    pub estimate: f64,
    pub theta_interval: AngleInterval,
    /// Total Grover applications `Σ k_i · n_shots`.
    pub n_oracle: u64,
    /// Total preparations of the initial state, i.e. all shots.
    pub n_shots_total: u64,
    /// Number of distinct powers used.
    pub n_rounds: usize,
    pub n_iterations: usize,
    pub trace: Vec<IterationRecord>,
    pub seed: u64,
    pub epsilon: f64,
    pub alpha: f64,
    /// Round bound `T` and per-round failure probability `α/T`.
    pub max_rounds: u32,
    pub alpha_per_round: f64,
    /// Updates whose new interval was not contained in the previous one.
    pub non_nesting_events: usize,
    pub warnings: Vec<String>,
}

impl EstimationResult {
    /// Scaling factors `K_i`, one per iteration.
    pub fn k_schedule(&self) -> Vec<u64> {
        self.trace.iter().map(|r| r.big_k).collect()
    }

    /// `K_{i+1} / K_i` for consecutive iterations.
    pub fn growth_ratios(&self) -> Vec<f64> {
        self.trace
            .windows(2)
            .map(|w| w[1].big_k as f64 / w[0].big_k as f64)
            .collect()
    }

    /// Largest merged tally of any round.
    pub fn max_round_shots(&self) -> u64 {
        self.trace.iter().map(|r| r.tally.shots()).max().unwrap_or(0)
    }

    pub fn overhead(&self) -> f64 {
        overhead_statistic(self, self.epsilon, self.alpha)
    }
}

/// Oracle calls in units of `ln((2/α) log₃(3π/20ε)) / ε`.
pub fn overhead_statistic(result: &EstimationResult, epsilon: f64, alpha: f64) -> f64 {
    overhead_factor(result.n_oracle, epsilon, alpha)
}

/// Runs the estimator against `sampler`.
pub fn run_iqae<S>(config: &IqaeConfig, problem: &AmplitudeProblem, sampler: &mut S) -> Result<EstimationResult>
where
    S: GroverSampler + ?Sized,
{
    config.validate()?;
    let rounds_bound = config.max_rounds();
    let alpha_round = config.alpha_per_round();
    let shot_ceiling = n_max(config.epsilon, config.alpha);
    let iteration_limit = rounds_bound as usize * shot_ceiling.div_ceil(config.n_shots) as usize + ITERATION_MARGIN;

    let mut warnings = Vec::new();
    if config.n_shots > shot_ceiling {
        warnings.push(format!(
            "n_shots = {} exceeds the guaranteed ceiling N_max = {shot_ceiling}",
            config.n_shots
        ));
    }

    let mut theta = AngleInterval::FULL;
    let mut k = 0u64;
    let mut up = true;
    let mut round_tally: Option<BinomialTally> = None;
    let mut round = 0usize;
    let mut n_oracle = 0u64;
    let mut n_shots_total = 0u64;
    let mut non_nesting_events = 0usize;
    let mut trace: Vec<IterationRecord> = Vec::new();

    while theta.width() > 2.0 * config.epsilon {
        if trace.len() >= iteration_limit {
            return Err(Error::IterationLimit {
                limit: iteration_limit,
                rounds: round + 1,
                k,
            });
        }
        let (k_next, up_next) = find_next_k(k, &theta, up, config.min_ratio);
        let drawn = sampler.sample_grover(problem, k_next, config.n_shots)?;
        n_oracle += k_next * config.n_shots;
        n_shots_total += config.n_shots;

        let tally = match round_tally {
            Some(prev) if k_next == k => prev.merge(&drawn),
            Some(_) => {
                round += 1;
                drawn
            }
            None => drawn,
        };
        round_tally = Some(tally);
        k = k_next;
        up = up_next;

        let big_k = scale_factor(k);
        let a_interval = config.ci_method.interval(&tally, alpha_round)?;
        let scaled = invert_to_scaled_angle(&a_interval, up);
        let updated = update_theta_interval(&theta, big_k, &scaled).clamp_to(&AngleInterval::FULL);
        if !theta.contains_interval(&updated) {
            non_nesting_events += 1;
        }
        theta = if config.strict {
            theta.intersect(&updated).unwrap_or(updated)
        } else {
            updated
        };

        trace.push(IterationRecord {
            k,
            big_k,
            up,
            round,
            tally,
            a_interval,
            theta_interval: theta,
        });
    }

    let sin2 = |x: f64| x.sin().powi(2);
    let a_interval = Interval01::clipped(sin2(theta.lo()), sin2(theta.hi()));
    Ok(EstimationResult {
        a_interval,
        estimate: a_interval.midpoint(),
        theta_interval: theta,
        n_oracle,
        n_shots_total,
        n_rounds: if trace.is_empty() { 0 } else { round + 1 },
        n_iterations: trace.len(),
        trace,
        seed: config.seed,
        epsilon: config.epsilon,
        alpha: config.alpha,
        max_rounds: rounds_bound,
        alpha_per_round: alpha_round,
        non_nesting_events,
        warnings,
    })
}

/// Runs the estimator with a [`RandomSource`](crate::oracle::RandomSource)
/// seeded from `config.seed`.
pub fn estimate(config: &IqaeConfig, problem: &AmplitudeProblem) -> Result<EstimationResult> {
    let mut rng = crate::oracle::RandomSource::new(config.seed);
    run_iqae(config, problem, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{NoiselessOracle, RandomSource};

    fn problem(a: f64) -> AmplitudeProblem {
        AmplitudeProblem::new(a).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(IqaeConfig::new(1e-3, 0.05, 100).validate().is_ok());
        assert!(IqaeConfig::new(0.0, 0.05, 100).validate().is_err());
        assert!(IqaeConfig::new(PI / 8.0, 0.05, 100).validate().is_err());
        assert!(IqaeConfig::new(1e-3, 0.0, 100).validate().is_err());
        assert!(IqaeConfig::new(1e-3, 0.05, 0).validate().is_err());
        assert!(IqaeConfig::new(1e-3, 0.05, 100).with_min_ratio(1.0).validate().is_err());
    }

    #[test]
    fn zero_amplitude_gives_interval_at_zero() {
        let config = IqaeConfig::new(1e-3, 0.05, 100);
        let res = run_iqae(&config, &problem(0.0), &mut RandomSource::new(1)).unwrap();
        assert_eq!(res.a_interval.lo(), 0.0);
        assert!(res.a_interval.width() <= 2e-3);
        assert!(res.trace.iter().all(|r| r.tally.ones() == 0));
    }

    #[test]
    fn half_amplitude_contains_truth() {
        let config = IqaeConfig::new(1e-3, 0.05, 100);
        let res = run_iqae(&config, &problem(0.5), &mut RandomSource::new(2)).unwrap();
        assert!(res.a_interval.contains(0.5));
        assert!(res.theta_interval.width() <= 2e-3);
        assert!((res.estimate - res.a_interval.midpoint()).abs() < 1e-15);
    }

    #[test]
    fn oracle_accounting() {
        let config = IqaeConfig::new(1e-3, 0.05, 100);
        let res = run_iqae(&config, &problem(0.3), &mut RandomSource::new(3)).unwrap();
        let calls: u64 = res.trace.iter().map(|r| r.k * 100).sum();
        assert_eq!(res.n_oracle, calls);
        assert_eq!(res.n_shots_total, 100 * res.n_iterations as u64);
        assert_eq!(res.trace[0].k, 0);
    }

    #[test]
    fn records_respect_invariants() {
        let config = IqaeConfig::new(1e-4, 0.05, 50);
        let res = run_iqae(&config, &problem(0.77), &mut RandomSource::new(4)).unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].k >= w[0].k);
            if w[1].k == w[0].k {
                assert_eq!(w[1].round, w[0].round);
                assert_eq!(w[1].tally.shots(), w[0].tally.shots() + 50);
            } else {
                assert_eq!(w[1].round, w[0].round + 1);
                assert!(w[1].big_k as f64 >= 2.0 * w[0].big_k as f64);
            }
        }
        for r in &res.trace {
            assert_eq!(r.big_k % 4, 2);
            assert_eq!(r.tally.shots() % 50, 0);
        }
        assert_eq!(res.n_rounds, res.trace.last().unwrap().round + 1);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let config = IqaeConfig::new(1e-4, 0.01, 100).with_ci_method(CiMethod::Chernoff);
        let a = run_iqae(&config, &problem(0.42), &mut RandomSource::new(77)).unwrap();
        let b = run_iqae(&config, &problem(0.42), &mut RandomSource::new(77)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn noiseless_tallies_converge_exactly() {
        let config = IqaeConfig::new(1e-7, 0.05, 1_000_000);
        for a in [0.0, 0.1, 0.3, 0.5, 0.73, 1.0] {
            let res = run_iqae(&config, &problem(a), &mut NoiselessOracle).unwrap();
            assert!((res.estimate - a).abs() < 1e-6, "a={a} got {}", res.estimate);
            assert!(res.a_interval.contains(a));
        }
    }

    #[test]
    fn oversized_shot_count_is_flagged() {
        let config = IqaeConfig::new(0.3, 0.05, 2_000_000);
        let res = run_iqae(&config, &problem(0.2), &mut RandomSource::new(5)).unwrap();
        assert_eq!(res.warnings.len(), 1);
    }

    #[test]
    fn strict_mode_keeps_intervals_nested() {
        let config = IqaeConfig::new(1e-4, 0.2, 10).with_strict(true);
        for seed in 0..20 {
            let res = run_iqae(&config, &problem(0.6), &mut RandomSource::new(seed)).unwrap();
            let mut prev = AngleInterval::FULL;
            for r in &res.trace {
                if prev.intersect(&r.theta_interval).is_some() {
                    assert!(prev.contains_interval(&r.theta_interval) || res.non_nesting_events > 0);
                }
                prev = r.theta_interval;
            }
        }
    }
}
