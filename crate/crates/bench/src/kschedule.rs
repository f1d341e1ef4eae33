//! Growth of the scaling factor `K_i = 4k_i + 2` from one iteration to the next.

use rayon::prelude::*;

use iqae::confint::CiMethod;
use iqae::iqae::{run_iqae, IqaeConfig};
use iqae::oracle::{AmplitudeProblem, RandomSource};

use crate::csv_io::{format_f64, write_table};
use crate::stats;
use crate::{BenchError, Result};

pub const KSCHEDULE_SCHEMA: &str = "iqae-bench/kschedule/v1";
pub const KSCHEDULE_HEADER: [&str; 6] = ["iteration", "count", "mean", "std", "min", "max"];

#[derive(Debug, Clone, PartialEq)]
pub struct KScheduleSpec {
    pub a: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub n_shots: u64,
    pub repetitions: u64,
    pub ci_method: CiMethod,
    pub min_ratio: f64,
    pub seed: u64,
}

impl KScheduleSpec {
    pub fn new(a: f64, epsilon: f64, alpha: f64, n_shots: u64, repetitions: u64, seed: u64) -> Self {
        Self {
            a,
            epsilon,
            alpha,
            n_shots,
            repetitions,
            ci_method: CiMethod::ClopperPearson,
            min_ratio: 2.0,
            seed,
        }
    }
}

/// Statistics of `K_{i+1}/K_i` at iteration `i` over the runs that reached
/// iteration `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationStats {
    pub iteration: usize,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Scaling factors and round indices of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub big_k: Vec<u64>,
    pub round: Vec<usize>,
}

impl Schedule {
    /// `(round of iteration i, K_{i+1}/K_i)` for consecutive iterations.
    pub fn ratios(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.big_k
            .windows(2)
            .zip(&self.round)
            .map(|(w, &round)| (round, w[1] as f64 / w[0] as f64))
    }

    pub fn first_round_len(&self) -> usize {
        self.round.iter().take_while(|&&r| r == 0).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KScheduleReport {
    pub per_iteration: Vec<IterationStats>,
    pub schedules: Vec<Schedule>,
}

impl KScheduleReport {
    /// Mean of `K_{i+1}/K_i` pooled over all iterations `i` that lie after
    /// the first round.
    pub fn mean_ratio_after_first_round(&self) -> f64 {
        let ratios: Vec<f64> = self
            .schedules
            .iter()
            .flat_map(|s| {
                s.ratios()
                    .filter(|(round, _)| *round >= 1)
                    .map(|(_, q)| q)
                    .collect::<Vec<_>>()
            })
            .collect();
        stats::mean(&ratios)
    }

    /// Runs whose first round used more than one iteration.
    pub fn first_round_repeats(&self) -> usize {
        self.schedules.iter().filter(|s| s.first_round_len() > 1).count()
    }

    /// Smallest ratio over every run and iteration.
    pub fn min_ratio(&self) -> f64 {
        stats::min(&self.per_iteration.iter().map(|s| s.min).collect::<Vec<_>>())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let records = self.per_iteration.iter().map(|s| {
            vec![
                s.iteration.to_string(),
                s.count.to_string(),
                format_f64(s.mean),
                format_f64(s.std),
                format_f64(s.min),
                format_f64(s.max),
            ]
        });
        write_table(out, KSCHEDULE_SCHEMA, &KSCHEDULE_HEADER, records)
    }
}

pub fn run_kschedule(spec: &KScheduleSpec) -> Result<KScheduleReport> {
    if spec.repetitions == 0 {
        return Err(BenchError::Invalid("repetitions must be at least 1".into()));
    }
    let problem = AmplitudeProblem::new(spec.a)?;
    let config = IqaeConfig::new(spec.epsilon, spec.alpha, spec.n_shots)
        .with_ci_method(spec.ci_method)
        .with_min_ratio(spec.min_ratio);
    config.validate()?;

    let schedules = (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| {
            let res = run_iqae(&config, &problem, &mut RandomSource::derived(spec.seed, rep))?;
            Ok(Schedule {
                big_k: res.k_schedule(),
                round: res.trace.iter().map(|r| r.round).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let longest = schedules.iter().map(|s| s.big_k.len()).max().unwrap_or(0);
    let per_iteration = (0..longest.saturating_sub(1))
        .map(|i| {
            let qs: Vec<f64> = schedules
                .iter()
                .filter(|s| s.big_k.len() > i + 1)
                .map(|s| s.big_k[i + 1] as f64 / s.big_k[i] as f64)
                .collect();
            IterationStats {
                iteration: i,
                count: qs.len(),
                mean: stats::mean(&qs),
                std: stats::std_dev(&qs),
                min: stats::min(&qs),
                max: stats::max(&qs),
            }
        })
        .collect();

    Ok(KScheduleReport {
        per_iteration,
        schedules,
    })
}
