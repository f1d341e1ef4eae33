//! Likelihood-ratio confidence sets.
//!
//! For large samples `2 ln(L(x̂) / L(x))` is approximately χ²₁, so the set
//! `{x : ln L(x) ≥ ln L(x̂) − q_{χ²₁}(1 − α) / 2}` is an approximate `1 − α`
//! confidence set. We return its connected hull: a grid scan finds the
//! outermost points above the level, and bisection refines each crossing.
//! Multimodal likelihoods therefore give a conservative interval.

use super::{chi2_quantile_1dof, Interval01};
use crate::{Error, Result};

const CROSSING_TOL: f64 = 1e-10;
const CROSSING_MAX_ITER: usize = 200;

/// Hull of a likelihood-ratio level set on an arbitrary closed domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrBounds {
    pub lo: f64,
    pub hi: f64,
    /// The level set reaches the lower end of the domain.
    pub clamped_lo: bool,
    /// The level set reaches the upper end of the domain.
    pub clamped_hi: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrInterval {
    pub interval: Interval01,
    pub clamped_lo: bool,
    pub clamped_hi: bool,
}

/// Likelihood-ratio interval for a parameter living in a sub-interval of `[0, 1]`.
pub fn likelihood_ratio_interval(
    loglik: impl Fn(f64) -> f64,
    a_hat: f64,
    alpha: f64,
    domain: Interval01,
    grid_n: usize,
) -> Result<LrInterval> {
    let b = likelihood_ratio_bounds(loglik, a_hat, alpha, domain.lo(), domain.hi(), grid_n)?;
    Ok(LrInterval {
        interval: Interval01::clipped(b.lo, b.hi),
        clamped_lo: b.clamped_lo,
        clamped_hi: b.clamped_hi,
    })
}

/// Likelihood-ratio bounds on `[lo, hi]`, for likelihoods naturally
/// parameterized by something other than a probability (e.g. an angle).
pub fn likelihood_ratio_bounds(
    loglik: impl Fn(f64) -> f64,
    x_hat: f64,
    alpha: f64,
    lo: f64,
    hi: f64,
    grid_n: usize,
) -> Result<LrBounds> {
    super::check_open_unit("alpha", alpha)?;
    if !(lo..=hi).contains(&x_hat) {
        return Err(Error::InvalidInterval(lo, hi));
    }
    let peak = loglik(x_hat);
    if !peak.is_finite() {
        return Err(Error::NonFiniteLikelihood(x_hat));
    }
    let level = peak - chi2_quantile_1dof(1.0 - alpha)? / 2.0;
    let above = |x: f64| {
        let v = loglik(x);
        !v.is_nan() && v >= level
    };

    let grid_n = grid_n.max(2);
    let step = (hi - lo) / (grid_n - 1) as f64;
    let node = |j: usize| if j + 1 == grid_n { hi } else { lo + step * j as f64 };
    let flags: Vec<bool> = (0..grid_n).map(|j| above(node(j))).collect();

    // The hull always contains x_hat, which may sit between grid nodes.
    let hat_cell = if step > 0.0 {
        (((x_hat - lo) / step).floor() as usize).min(grid_n - 1)
    } else {
        0
    };

    let first = flags.iter().position(|&f| f);
    let (lower, clamped_lo) = match first {
        Some(0) => (lo, true),
        Some(j) if node(j) <= x_hat => (bisect_crossing(&above, node(j - 1), node(j)), false),
        _ => {
            if x_hat <= lo {
                (lo, true)
            } else {
                // No grid node above the level left of x_hat; the node just
                // below x_hat is therefore below the level.
                (bisect_crossing(&above, node(hat_cell), x_hat), false)
            }
        }
    };

    let last = flags.iter().rposition(|&f| f);
    let (upper, clamped_hi) = match last {
        Some(j) if j + 1 == grid_n => (hi, true),
        Some(j) if node(j) >= x_hat => (bisect_crossing(&above, node(j + 1), node(j)), false),
        _ => {
            if x_hat >= hi {
                (hi, true)
            } else {
                let right = (hat_cell + 1).min(grid_n - 1);
                (bisect_crossing(&above, node(right), x_hat), false)
            }
        }
    };

    Ok(LrBounds {
        lo: lower.min(x_hat),
        hi: upper.max(x_hat),
        clamped_lo,
        clamped_hi,
    })
}

/// Bisects between a point below the level and a point above it, returning
/// the side of the bracket that is above the level.
fn bisect_crossing(above: &impl Fn(f64) -> bool, mut outside: f64, mut inside: f64) -> f64 {
    for _ in 0..CROSSING_MAX_ITER {
        if (inside - outside).abs() <= CROSSING_TOL {
            break;
        }
        let mid = 0.5 * (inside + outside);
        if above(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}
