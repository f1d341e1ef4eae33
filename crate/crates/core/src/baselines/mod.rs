//! Reference estimators used for comparison: classical Monte Carlo, maximum
//! likelihood amplitude estimation on a power-of-two schedule, and canonical
//! phase-estimation based amplitude estimation with maximum likelihood
//! post-processing.

mod mc;
mod mlae;
mod optimize;
mod qae;

pub use mc::{run_mc, McResult};
pub use mlae::{mlae_estimate, mlae_loglik, run_mlae, MlaeResult, ScheduleRecord, MLAE_DEFAULT_GRID};
pub use qae::{qae_estimate, qae_likelihood, qae_loglik, run_qae_mle, QaeResult, QaeSampleSet};

/// Floor applied to probabilities before taking logarithms.
pub(crate) const LOG_FLOOR: f64 = 1e-300;

pub(crate) fn floored_ln(p: f64) -> f64 {
    p.max(LOG_FLOOR).ln()
}
