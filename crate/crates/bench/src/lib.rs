//! Experiment harness for the amplitude estimators in the `iqae` crate.
//!
//! Every experiment is a list of independent rows. Row `i` of an experiment
//! seeded with `s` draws from `RandomSource::derived(s, i)`, so results do not
//! depend on how rows are scheduled across threads, and rows are always
//! written in index order.

pub mod algorithm;
pub mod compare;
pub mod csv_io;
mod error;
pub mod kschedule;
pub mod stats;
pub mod sweep;

pub use algorithm::{run_row, Algorithm, RunParams, SweepRow};
pub use error::BenchError;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
