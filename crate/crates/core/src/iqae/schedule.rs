//! Choosing the next Grover power and mapping interval estimates between the
//! scaled angle `K θ_a` and `θ_a`.

use std::f64::consts::{PI, TAU};

use crate::confint::Interval01;
use crate::oracle::reduce_mod_pi;
use crate::{Error, Result};

/// Largest scaling factor considered when the angle interval is degenerate.
const MAX_SCALE: u64 = 1 << 52;

/// Relative distance to a multiple of 2π below which a scaled endpoint is
/// treated as lying on the turn boundary.
const TURN_SNAP_TOLERANCE: f64 = 1e-12;

/// Closed interval of angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleInterval {
    lo: f64,
    hi: f64,
}

impl AngleInterval {
    /// Full range of `θ_a` for an amplitude in `[0, 1]`.
    pub const FULL: AngleInterval = AngleInterval {
        lo: 0.0,
        hi: std::f64::consts::FRAC_PI_2,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &AngleInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub(crate) fn intersect(&self, other: &AngleInterval) -> Option<AngleInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(AngleInterval { lo, hi })
    }

    pub(crate) fn clamp_to(&self, bounds: &AngleInterval) -> AngleInterval {
        let lo = self.lo.clamp(bounds.lo, bounds.hi);
        let hi = self.hi.clamp(bounds.lo, bounds.hi);
        AngleInterval { lo, hi: hi.max(lo) }
    }
}

/// Scaling factor `K = 4k + 2` applied to `θ_a` by `k` Grover iterations.
pub fn scale_factor(k: u64) -> u64 {
    4 * k + 2
}

/// Finds the next Grover power.
///
/// Returns the largest `k` whose scale `K = 4k + 2` satisfies
/// `r K_i ≤ K ≤ ⌊π / (θ_u − θ_l)⌋` and maps `[θ_l, θ_u]` into a single
/// half-plane: both `K θ` modulo 2π in `[0, π]` (upper) or in `[π, 2π]`
/// (lower). Products are reduced in extended precision, so endpoints such as
/// `θ_u = π/2`, which land on a multiple of π, are classified exactly. Falls
/// back to `(k_i, up_i)` when no candidate exists.
pub fn find_next_k(k_i: u64, interval: &AngleInterval, up_i: bool, min_ratio: f64) -> (u64, bool) {
    let big_k_i = scale_factor(k_i) as f64;
    let width = interval.width();
    let k_max = {
        let bound = (PI / width).floor();
        if bound.is_finite() && bound < MAX_SCALE as f64 {
            bound as u64
        } else {
            MAX_SCALE
        }
    };
    if k_max < 2 {
        return (k_i, up_i);
    }
    let mut big_k = k_max - (k_max - 2) % 4;
    let min_k = min_ratio * big_k_i;
    while big_k as f64 >= min_k {
        if let Some(up) = shared_half_turn(big_k, interval) {
            return ((big_k - 2) / 4, up);
        }
        if big_k < 6 {
            break;
        }
        big_k -= 4;
    }
    (k_i, up_i)
}

/// Whether `[K θ_l, K θ_u]` lies in one half-turn `[jπ, (j + 1)π]` with
/// `j = ⌊K θ_l / π⌋`; `Some(true)` for even `j` (upper half-plane).
fn shared_half_turn(big_k: u64, interval: &AngleInterval) -> Option<bool> {
    let (t_lo, r_lo) = reduce_mod_pi(big_k, interval.lo());
    let (t_hi, r_hi) = reduce_mod_pi(big_k, interval.hi());
    if !(t_lo.is_finite() && t_hi.is_finite()) {
        return None;
    }
    let j = if r_lo < 0.0 { t_lo - 1.0 } else { t_lo };
    let d = t_hi - (j + 1.0);
    (d < 0.0 || (d == 0.0 && r_hi <= 0.0)).then_some(j.rem_euclid(2.0) == 0.0)
}

/// Inverts `a = (1 − cos φ) / 2` on an interval of `a`, choosing the branch
/// `φ ∈ [0, π]` (`up`) or `φ ∈ [π, 2π]`.
pub fn invert_to_scaled_angle(a_interval: &Interval01, up: bool) -> AngleInterval {
    let lo = a_interval.lo().clamp(0.0, 1.0);
    let hi = a_interval.hi().clamp(0.0, 1.0);
    let angle = |a: f64| (1.0 - 2.0 * a).clamp(-1.0, 1.0).acos();
    if up {
        AngleInterval {
            lo: angle(lo),
            hi: angle(hi),
        }
    } else {
        AngleInterval {
            lo: TAU - angle(hi),
            hi: TAU - angle(lo),
        }
    }
}

/// Maps a scaled-angle interval (within one turn) back to `θ_a`, keeping the
/// number of full turns completed by `K θ_l` and `K θ_u`.
///
/// An endpoint sitting on a multiple of 2π closes one turn and opens the
/// next. When the two endpoints would otherwise be assigned different turns,
/// such an endpoint is counted in the turn of the other one, so that a bound
/// placed exactly at `2π(j + 1)` by a previous update stays in turn `j`.
pub fn update_theta_interval(current: &AngleInterval, big_k: u64, scaled: &AngleInterval) -> AngleInterval {
    let kf = big_k as f64;
    let x_lo = kf * current.lo();
    let x_hi = kf * current.hi();
    let tol = TURN_SNAP_TOLERANCE * x_hi.abs().max(1.0);
    let mut j_lo = (x_lo / TAU).floor();
    let mut j_hi = (x_hi / TAU).floor();
    if j_hi > j_lo && x_hi - TAU * j_hi <= tol {
        j_hi -= 1.0;
    }
    if j_hi > j_lo && TAU * (j_lo + 1.0) - x_lo <= tol {
        j_lo += 1.0;
    }
    AngleInterval {
        lo: (TAU * j_lo + scaled.lo()) / kf,
        hi: (TAU * j_hi + scaled.hi()) / kf,
    }
}
