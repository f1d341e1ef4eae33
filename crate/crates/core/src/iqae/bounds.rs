//! Worst-case quantities of the convergence guarantee.
//!
//! With per-round failure probability `α/T` and Chernoff intervals, a round
//! needs at most `N_max(ε, α)` shots before the next power can grow by a
//! factor of three or more; the total number of Grover applications is then
//! below `1.15·10⁶/ε · ln((2/α) log₃(3π/20ε))`.

use std::f64::consts::PI;

/// Half-width `π/30` that a scaled-angle interval must reach for the next
/// power to grow at least threefold.
pub const SECTOR_HALF_WIDTH: f64 = PI / 30.0;

/// Leading constant of the oracle-call bound.
pub const ORACLE_BOUND_CONSTANT: f64 = 1.15e6;

/// Upper bound `T = ⌈log_r(r π / 8ε)⌉` on the number of rounds when each new
/// power grows by at least `r`. Equals `⌈log₂(π / 4ε)⌉` for `r = 2`.
pub fn max_rounds(epsilon: f64, min_ratio: f64) -> u32 {
    let arg = min_ratio * PI / (8.0 * epsilon);
    let t = if min_ratio == 2.0 {
        arg.log2()
    } else {
        arg.ln() / min_ratio.ln()
    };
    (t.ceil() as u32).max(1)
}

/// `ln((2/α) log₃(3π / 20ε))`, the logarithmic factor shared by the bounds.
pub fn log_factor(epsilon: f64, alpha: f64) -> f64 {
    let rounds = (3.0 * PI / (20.0 * epsilon)).ln() / 3f64.ln();
    (2.0 / alpha * rounds).ln()
}

/// `12 / sin⁴(π/30)`, just below 100520.
pub fn n_max_constant() -> f64 {
    12.0 / SECTOR_HALF_WIDTH.sin().powi(4)
}

/// Unrounded shot ceiling `12 / sin⁴(π/30) · ln((2/α) log₃(3π/20ε))`.
pub fn n_max_real(epsilon: f64, alpha: f64) -> f64 {
    n_max_constant() * log_factor(epsilon, alpha)
}

/// Per-round shot ceiling of the guarantee, rounded up.
pub fn n_max(epsilon: f64, alpha: f64) -> u64 {
    n_max_real(epsilon, alpha).ceil().max(1.0) as u64
}

/// Bound on the total number of Grover applications.
pub fn oracle_call_bound(epsilon: f64, alpha: f64) -> f64 {
    ORACLE_BOUND_CONSTANT / epsilon * log_factor(epsilon, alpha)
}

/// Ratio of oracle calls to `ln((2/α) log₃(3π/20ε)) / ε`.
pub fn overhead_factor(n_oracle: u64, epsilon: f64, alpha: f64) -> f64 {
    n_oracle as f64 / (log_factor(epsilon, alpha) / epsilon)
}

/// Largest power growth `K_{i+1}/K_i` possible when every scaled interval has
/// half-width at least `arcsin(sin²(π/30))`: `π / (2 arcsin(sin²(π/30)))`.
pub fn max_growth_ratio() -> f64 {
    PI / (2.0 * SECTOR_HALF_WIDTH.sin().powi(2).asin())
}
