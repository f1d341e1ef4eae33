//! Grids of IQAE runs and their overhead and coverage summaries.

use rayon::prelude::*;

use iqae::confint::CiMethod;
use iqae::oracle::RandomSource;

use crate::algorithm::{run_iqae_row, RunParams, SweepRow};
use crate::stats;
use crate::{BenchError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub a_values: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub alphas: Vec<f64>,
    pub n_shots: u64,
    pub repetitions: u64,
    pub ci_method: CiMethod,
    pub min_ratio: f64,
    pub seed: u64,
}

impl SweepSpec {
    /// `a ∈ {i/20}`, `ε ∈ {10⁻³, 10⁻⁴}`, `α ∈ {0.01, 0.05, 0.1}`, 100 shots.
    pub fn standard(repetitions: u64, seed: u64) -> Self {
        Self {
            a_values: (0..=20).map(|i| i as f64 / 20.0).collect(),
            epsilons: vec![1e-3, 1e-4],
            alphas: vec![0.01, 0.05, 0.1],
            n_shots: 100,
            repetitions,
            ci_method: CiMethod::ClopperPearson,
            min_ratio: 2.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty = |name: &str, v: &[f64]| {
            if v.is_empty() {
                Err(BenchError::Invalid(format!("{name} list is empty")))
            } else {
                Ok(())
            }
        };
        nonempty("amplitude", &self.a_values)?;
        nonempty("epsilon", &self.epsilons)?;
        nonempty("alpha", &self.alphas)?;
        if self.repetitions == 0 {
            return Err(BenchError::Invalid("repetitions must be at least 1".into()));
        }
        if let Some(a) = self.a_values.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(BenchError::Invalid(format!("amplitude {a} outside [0, 1]")));
        }
        for cell in self.cells() {
            cell.params.iqae_config().validate()?;
        }
        Ok(())
    }

    /// Rows in output order: ε, then α, then a, then repetition.
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut cells = Vec::new();
        for &epsilon in &self.epsilons {
            for &alpha in &self.alphas {
                for &a in &self.a_values {
                    for _ in 0..self.repetitions {
                        let params = RunParams {
                            ci_method: self.ci_method,
                            min_ratio: self.min_ratio,
                            ..RunParams::iqae(a, epsilon, alpha, self.n_shots)
                        };
                        cells.push(SweepCell {
                            index: cells.len() as u64,
                            params,
                        });
                    }
                }
            }
        }
        cells
    }

    pub fn n_rows(&self) -> usize {
        self.epsilons.len() * self.alphas.len() * self.a_values.len() * self.repetitions as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub index: u64,
    pub params: RunParams,
}

/// Per-run quantities not present in the CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunDiagnostics {
    pub n_rounds: usize,
    pub max_rounds: u32,
    pub max_round_shots: u64,
    pub width: f64,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    Ok(run_sweep_detailed(spec)?.into_iter().map(|(row, _)| row).collect())
}

/// Rows together with round counts and widths of every run.
pub fn run_sweep_detailed(spec: &SweepSpec) -> Result<Vec<(SweepRow, RunDiagnostics)>> {
    spec.validate()?;
    spec.cells()
        .into_par_iter()
        .map(|cell| {
            let mut rng = RandomSource::derived(spec.seed, cell.index);
            let (row, res) = run_iqae_row(&cell.params, cell.index, &mut rng)?;
            let diag = RunDiagnostics {
                n_rounds: res.n_rounds,
                max_rounds: res.max_rounds,
                max_round_shots: res.max_round_shots(),
                width: res.a_interval.width(),
            };
            Ok((row, diag))
        })
        .collect()
}

/// Overhead and coverage over all rows sharing `(ε, α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub epsilon: f64,
    pub alpha: f64,
    pub runs: usize,
    pub mean_overhead: f64,
    pub max_overhead: f64,
    pub coverage: f64,
}

impl SweepSummary {
    /// Coverage lower limit `1 − α − 3σ`, `σ = √(α(1 − α)/n)`.
    pub fn coverage_floor(&self) -> f64 {
        let sigma = (self.alpha * (1.0 - self.alpha) / self.runs as f64).sqrt();
        1.0 - self.alpha - 3.0 * sigma
    }
}

/// Groups rows by `(ε, α)` in order of first appearance.
pub fn summarize(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut keys: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        let key = (row.epsilon, row.alpha);
        if !keys
            .iter()
            .any(|k| k.0.to_bits() == key.0.to_bits() && k.1.to_bits() == key.1.to_bits())
        {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(epsilon, alpha)| {
            let group: Vec<&SweepRow> = rows
                .iter()
                .filter(|r| r.epsilon.to_bits() == epsilon.to_bits() && r.alpha.to_bits() == alpha.to_bits())
                .collect();
            let overheads: Vec<f64> = group.iter().map(|r| r.overhead).collect();
            let covered = group.iter().filter(|r| r.covered).count();
            SweepSummary {
                epsilon,
                alpha,
                runs: group.len(),
                mean_overhead: stats::mean(&overheads),
                max_overhead: stats::max(&overheads),
                coverage: covered as f64 / group.len() as f64,
            }
        })
        .collect()
}
