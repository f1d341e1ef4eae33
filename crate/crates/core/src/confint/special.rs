use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::{Error, Result};

const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const CF_MAX_ITER: usize = 100_000;

const BISECT_MAX_ITER: usize = 200;
const BISECT_REL_TOL: f64 = 1e-14;

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Evaluated with the modified Lentz continued fraction, switching to the
/// reflected form `1 − I_{1−x}(b, a)` beyond the mean so that the fraction
/// converges quickly. The fraction needs O(√max(a, b)) terms, so the
/// iteration cap is generous enough for shot counts well beyond 10⁶.
/// Returns `NaN` for `a ≤ 0`, `b ≤ 0` or `x ∉ [0, 1]`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&x) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b);
    let front = ln_front.exp();
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        front * continued_fraction(x, a, b) / a
    } else {
        1.0 - front * continued_fraction(1.0 - x, b, a) / b
    };
    value.clamp(0.0, 1.0)
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

fn continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Inverse of `x ↦ I_x(a, b)` by bisection.
pub fn beta_quantile(p: f64, a: f64, b: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    bisect_increasing(|x| regularized_incomplete_beta(x, a, b), p, 0.0, 1.0)
}

/// Finds `x ∈ [lo, hi]` with `f(x) ≈ target` for nondecreasing `f`.
fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..BISECT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= BISECT_REL_TOL * hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Upper standard-normal tail `P[Z > z]`.
fn normal_upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// `z ≥ 0` with `P[Z > z] = tail`, for `tail ∈ (0, 1/2]`.
fn upper_tail_inverse(tail: f64) -> f64 {
    // P[Z > z] is decreasing, so bisect on its negation.
    bisect_increasing(|z| -normal_upper_tail(z), -tail, 0.0, 40.0)
}

/// Standard-normal quantile, found by root-finding on the complementary
/// error function.
pub fn normal_quantile(p: f64) -> Result<f64> {
    super::check_open_unit("p", p)?;
    Ok(if p >= 0.5 {
        upper_tail_inverse(1.0 - p)
    } else {
        -upper_tail_inverse(p)
    })
}

/// Quantile of the χ² distribution with one degree of freedom: the square of
/// the standard-normal quantile at `(1 + p) / 2`.
pub fn chi2_quantile_1dof(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OpenUnitInterval { name: "p", value: p });
    }
    let z = upper_tail_inverse(0.5 * (1.0 - p));
    Ok(z * z)
}
