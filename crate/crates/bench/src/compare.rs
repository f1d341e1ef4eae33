//! Interval half-width against oracle calls for every algorithm.
//!
//! Budgets are set per algorithm: the target ε for IQAE, the sample count for
//! Monte Carlo and the number of powers or ancillas `m` for MLAE and QAE.
//! Calls are Grover applications for the quantum algorithms and state
//! preparations for Monte Carlo.

use rayon::prelude::*;

use iqae::confint::CiMethod;
use iqae::oracle::RandomSource;

use crate::algorithm::{run_row, Algorithm, RunParams};
use crate::csv_io::{format_f64, write_table};
use crate::stats::{self, LineFit};
use crate::{BenchError, Result};

pub const COMPARE_SCHEMA: &str = "iqae-bench/compare/v1";
pub const COMPARE_HEADER: [&str; 7] = [
    "algorithm",
    "budget",
    "seed_index",
    "n_oracle",
    "half_width",
    "abs_error",
    "covered",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CompareSpec {
    pub a: f64,
    pub alpha: f64,
    pub n_shots: u64,
    pub seeds: u64,
    pub iqae_epsilons: Vec<f64>,
    pub mc_samples: Vec<u64>,
    pub mlae_powers: Vec<u32>,
    pub qae_ancillas: Vec<u32>,
    pub ci_method: CiMethod,
    pub seed: u64,
}

impl CompareSpec {
    pub fn standard(a: f64, seeds: u64, seed: u64) -> Self {
        Self {
            a,
            alpha: 0.05,
            n_shots: 100,
            seeds,
            iqae_epsilons: vec![1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5],
            mc_samples: vec![100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000],
            mlae_powers: (1..=8).collect(),
            qae_ancillas: (3..=10).collect(),
            ci_method: CiMethod::ClopperPearson,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(BenchError::Invalid("seed count must be at least 1".into()));
        }
        if self.n_shots == 0 {
            return Err(BenchError::Invalid("shots must be at least 1".into()));
        }
        if self.iqae_epsilons.iter().any(|&e| e.is_nan() || e <= 0.0)
            || self.mc_samples.contains(&0)
            || self.mlae_powers.contains(&0)
            || self.qae_ancillas.contains(&0)
        {
            return Err(BenchError::Invalid("every budget must be positive".into()));
        }
        Ok(())
    }

    fn budgets(&self) -> Vec<(Algorithm, f64, RunParams)> {
        let base = RunParams {
            ci_method: self.ci_method,
            ..RunParams::iqae(self.a, f64::NAN, self.alpha, self.n_shots)
        };
        let mut out = Vec::new();
        for &epsilon in &self.iqae_epsilons {
            out.push((
                Algorithm::Iqae,
                epsilon,
                RunParams {
                    epsilon,
                    ..base.clone()
                },
            ));
        }
        for &samples in &self.mc_samples {
            let p = RunParams {
                algorithm: Algorithm::Mc,
                shots: samples,
                ..base.clone()
            };
            out.push((Algorithm::Mc, samples as f64, p));
        }
        for &m in &self.mlae_powers {
            let p = RunParams {
                algorithm: Algorithm::Mlae,
                m,
                ..base.clone()
            };
            out.push((Algorithm::Mlae, m as f64, p));
        }
        for &m in &self.qae_ancillas {
            let p = RunParams {
                algorithm: Algorithm::Qae,
                m,
                ..base.clone()
            };
            out.push((Algorithm::Qae, m as f64, p));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparePoint {
    pub algorithm: Algorithm,
    /// ε for IQAE, samples for Monte Carlo, `m` for MLAE and QAE.
    pub budget: f64,
    pub seed_index: u64,
    pub n_oracle: u64,
    pub half_width: f64,
    pub abs_error: f64,
    pub covered: bool,
}

pub fn run_compare(spec: &CompareSpec) -> Result<Vec<ComparePoint>> {
    spec.validate()?;
    let jobs: Vec<(u64, Algorithm, f64, RunParams)> = spec
        .budgets()
        .into_iter()
        .flat_map(|(alg, budget, params)| (0..spec.seeds).map(move |_| (alg, budget, params.clone())))
        .enumerate()
        .map(|(i, (alg, budget, params))| (i as u64, alg, budget, params))
        .collect();
    jobs.into_par_iter()
        .map(|(index, algorithm, budget, params)| {
            let mut rng = RandomSource::derived(spec.seed, index);
            let row = run_row(&params, index, &mut rng)?;
            let interval = row.interval();
            Ok(ComparePoint {
                algorithm,
                budget,
                seed_index: index,
                n_oracle: row.n_oracle,
                half_width: interval.width() / 2.0,
                abs_error: (interval.midpoint() - spec.a).abs(),
                covered: row.covered,
            })
        })
        .collect()
}

pub fn write_points<W: std::io::Write>(out: W, points: &[ComparePoint]) -> Result<()> {
    let records = points.iter().map(|p| {
        vec![
            p.algorithm.to_string(),
            format_f64(p.budget),
            p.seed_index.to_string(),
            p.n_oracle.to_string(),
            format_f64(p.half_width),
            format_f64(p.abs_error),
            p.covered.to_string(),
        ]
    });
    write_table(out, COMPARE_SCHEMA, &COMPARE_HEADER, records)
}

/// Mean calls and mean half-width over the seeds of one budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetMean {
    pub budget: f64,
    pub n_oracle: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmFit {
    pub algorithm: Algorithm,
    pub means: Vec<BudgetMean>,
    /// Fit of ln(half-width) against ln(calls) over budgets with calls > 0.
    pub fit: Option<LineFit>,
}

impl AlgorithmFit {
    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }

    /// Half-width predicted by the fitted line at `calls`.
    pub fn predict(&self, calls: f64) -> Option<f64> {
        self.fit.map(|f| f.eval(calls.ln()).exp())
    }

    fn call_range(&self) -> (f64, f64) {
        let calls: Vec<f64> = self.means.iter().map(|m| m.n_oracle).filter(|&c| c > 0.0).collect();
        (stats::min(&calls), stats::max(&calls))
    }
}

pub fn fit_algorithms(points: &[ComparePoint]) -> Vec<AlgorithmFit> {
    Algorithm::ALL
        .into_iter()
        .filter_map(|algorithm| {
            let mut budgets: Vec<f64> = Vec::new();
            for p in points.iter().filter(|p| p.algorithm == algorithm) {
                if !budgets.iter().any(|b| b.to_bits() == p.budget.to_bits()) {
                    budgets.push(p.budget);
                }
            }
            if budgets.is_empty() {
                return None;
            }
            let means: Vec<BudgetMean> = budgets
                .into_iter()
                .map(|budget| {
                    let group: Vec<&ComparePoint> = points
                        .iter()
                        .filter(|p| p.algorithm == algorithm && p.budget.to_bits() == budget.to_bits())
                        .collect();
                    BudgetMean {
                        budget,
                        n_oracle: stats::mean(&group.iter().map(|p| p.n_oracle as f64).collect::<Vec<_>>()),
                        half_width: stats::mean(&group.iter().map(|p| p.half_width).collect::<Vec<_>>()),
                    }
                })
                .collect();
            let fit_points: Vec<(f64, f64)> = means
                .iter()
                .filter(|m| m.n_oracle > 0.0 && m.half_width > 0.0)
                .map(|m| (m.n_oracle, m.half_width))
                .collect();
            Some(AlgorithmFit {
                algorithm,
                fit: stats::log_log_fit(&fit_points),
                means,
            })
        })
        .collect()
}

/// IQAE half-width from its fitted line next to the measured QAE half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedBudget {
    pub n_oracle: f64,
    pub iqae_half_width: f64,
    pub other_half_width: f64,
}

/// Compares `other` with IQAE at every budget of `other` that falls inside
/// the range of calls covered by the IQAE runs.
pub fn matched_budgets(fits: &[AlgorithmFit], other: Algorithm) -> Vec<MatchedBudget> {
    let Some(iqae) = fits.iter().find(|f| f.algorithm == Algorithm::Iqae) else {
        return Vec::new();
    };
    let Some(rival) = fits.iter().find(|f| f.algorithm == other) else {
        return Vec::new();
    };
    let (lo, hi) = iqae.call_range();
    rival
        .means
        .iter()
        .filter(|m| m.n_oracle >= lo && m.n_oracle <= hi)
        .filter_map(|m| {
            Some(MatchedBudget {
                n_oracle: m.n_oracle,
                iqae_half_width: iqae.predict(m.n_oracle)?,
                other_half_width: m.half_width,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> CompareSpec {
        CompareSpec {
            seeds: 2,
            iqae_epsilons: vec![1e-2, 1e-3],
            mc_samples: vec![100, 10_000],
            mlae_powers: vec![2, 3],
            qae_ancillas: vec![3, 4],
            ..CompareSpec::standard(0.5, 2, 1)
        }
    }

    #[test]
    fn points_cover_every_budget_and_seed() {
        let spec = tiny_spec();
        let points = run_compare(&spec).unwrap();
        assert_eq!(points.len(), 16);
        assert!(points.iter().enumerate().all(|(i, p)| p.seed_index == i as u64));
        let fits = fit_algorithms(&points);
        assert_eq!(fits.len(), 4);
        assert!(fits.iter().all(|f| f.means.len() == 2));
    }

    #[test]
    fn zero_budget_is_rejected() {
        let mut spec = tiny_spec();
        spec.mc_samples.push(0);
        assert!(run_compare(&spec).is_err());
        let mut spec = tiny_spec();
        spec.iqae_epsilons.push(0.0);
        assert!(run_compare(&spec).is_err());
        let mut spec = tiny_spec();
        spec.seeds = 0;
        assert!(run_compare(&spec).is_err());
    }

    #[test]
    fn matched_budgets_stay_inside_iqae_range() {
        let means = |pts: &[(f64, f64)]| {
            pts.iter()
                .map(|&(c, w)| BudgetMean {
                    budget: 0.0,
                    n_oracle: c,
                    half_width: w,
                })
                .collect::<Vec<_>>()
        };
        let iqae_means = means(&[(100.0, 0.1), (10_000.0, 0.001)]);
        let fits = vec![
            AlgorithmFit {
                algorithm: Algorithm::Iqae,
                fit: stats::log_log_fit(&[(100.0, 0.1), (10_000.0, 0.001)]),
                means: iqae_means,
            },
            AlgorithmFit {
                algorithm: Algorithm::Qae,
                fit: None,
                means: means(&[(50.0, 0.2), (1000.0, 0.02), (1e6, 1e-5)]),
            },
        ];
        let matched = matched_budgets(&fits, Algorithm::Qae);
        assert_eq!(matched.len(), 1);
        assert!((matched[0].iqae_half_width - 0.01).abs() < 1e-12);
    }
}
