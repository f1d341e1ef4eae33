use crate::confint::{clopper_pearson_interval, Interval01};
use crate::oracle::{AmplitudeProblem, GroverSampler};
use crate::Result;

/// Monte Carlo estimate from bare preparations of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    /// Clopper-Pearson interval at level `1 − α`.
    pub interval: Interval01,
    pub n_samples: u64,
    pub ones: u64,
}

impl McResult {
    /// Applications of the state preparation, one per sample.
    pub fn n_oracle(&self) -> u64 {
        self.n_samples
    }
}

pub fn run_mc<S>(problem: &AmplitudeProblem, n_samples: u64, alpha: f64, sampler: &mut S) -> Result<McResult>
where
    S: GroverSampler + ?Sized,
{
    crate::confint::check_open_unit("alpha", alpha)?;
    let tally = sampler.sample_grover(problem, 0, n_samples)?;
    Ok(McResult {
        estimate: tally.frequency(),
        interval: clopper_pearson_interval(&tally, alpha)?,
        n_samples,
        ones: tally.ones(),
    })
}
