//! Amplitude estimation over analytic oracles.
//!
//! The crate estimates the amplitude `a = sin²(θ_a)` of a prepared state from
//! simulated measurements. Four estimators are provided:
//!
//! - [`iqae`]: iterative amplitude estimation driven by Grover powers chosen
//!   so that the cosine of the scaled angle stays invertible.
//! - [`baselines::mlae`]: maximum-likelihood estimation over a power-of-two
//!   schedule of Grover powers.
//! - [`baselines::qae`]: phase-estimation based estimation with maximum
//!   likelihood post-processing.
//! - [`baselines::mc`]: plain Monte Carlo sampling.
//!
//! Measurements come from [`oracle`], which samples the exact outcome
//! distributions instead of simulating circuits.

pub mod baselines;
pub mod confint;
mod error;
pub mod iqae;
pub mod oracle;

pub use error::{Error, Result};
