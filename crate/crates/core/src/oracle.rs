//! Analytic measurement oracles.
//!
//! Instead of simulating circuits, every measurement is drawn from its exact
//! outcome distribution:
//!
//! - after `k` Grover steps the marked qubit reads `1` with probability
//!   `sin²((2k + 1) θ_a)`;
//! - the `m` ancillas of phase-estimation based amplitude estimation read `y`
//!   with the probability given by [`qpe_distribution`].
//!
//! Randomness comes from [`RandomSource`], a ChaCha8 stream keyed by a 64-bit
//! seed and a stream index, so every tally is reproducible bit for bit.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::confint::BinomialTally;
use crate::{Error, Result};

/// Largest supported ancilla count for phase-estimation sampling.
pub const MAX_ANCILLAS: u32 = 30;

const INVERSION_MAX_SHOTS: u64 = 64;
const KERNEL_ZERO: f64 = 1e-15;

// π split into three doubles; their sum carries ~160 bits.
const PI_HI: f64 = std::f64::consts::PI;
const PI_MID: f64 = 1.224_646_799_147_353_2e-16;
const PI_LO: f64 = -2.994_769_809_718_339_7e-33;

/// The estimation target `a` and its angle `θ_a = arcsin(√a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeProblem {
    a: f64,
    theta_a: f64,
}

impl AmplitudeProblem {
    pub fn new(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidAmplitude(a));
        }
        Ok(Self {
            a,
            theta_a: a.sqrt().asin(),
        })
    }

    pub fn from_theta(theta_a: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta_a) {
            return Err(Error::InvalidAngle(theta_a));
        }
        let s = theta_a.sin();
        Ok(Self { a: s * s, theta_a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn theta_a(&self) -> f64 {
        self.theta_a
    }
}

/// Writes `n θ = turns · π + r` with `|r| ≤ π/2`, reducing the product in
/// extended precision. Returns `(turns, r)`; `(NaN, NaN)` on overflow.
pub(crate) fn reduce_mod_pi(n: u64, theta: f64) -> (f64, f64) {
    let n = n as f64;
    let hi = n * theta;
    if !hi.is_finite() {
        return (f64::NAN, f64::NAN);
    }
    if hi.abs() < 1.0 {
        return (0.0, hi);
    }
    let lo = n.mul_add(theta, -hi);
    let turns = (hi / PI_HI).round();
    let p = turns * PI_HI;
    let p_err = turns.mul_add(PI_HI, -p);
    // hi − p is exact: both lie within a factor of two of each other.
    let r = (((hi - p) - p_err) + lo) - turns * PI_MID - turns * PI_LO;
    (turns, r)
}

/// `sin²(n θ)`, accurate for large Grover powers.
pub(crate) fn sin2_multiple(n: u64, theta: f64) -> f64 {
    let (_, r) = reduce_mod_pi(n, theta);
    let s = r.sin();
    s * s
}

/// Probability of measuring `|1⟩` after `k` Grover iterations.
pub fn grover_success_prob(problem: &AmplitudeProblem, k: u64) -> f64 {
    sin2_multiple(2 * k + 1, problem.theta_a())
}

/// Fejér kernel `sin²(M Δ π) / (M² sin²(Δ π))`, with `Δ` the distance on the
/// unit circle (period 1) between `x` and the nearest integer.
pub(crate) fn fejer_kernel(x: f64, big_m: f64) -> f64 {
    let frac = x - x.floor();
    let delta = frac.min(1.0 - frac);
    let denom = (delta * PI).sin();
    if denom.abs() < KERNEL_ZERO {
        return 1.0;
    }
    let num = (big_m * delta * PI).sin();
    (num * num) / (big_m * big_m * denom * denom)
}

fn check_ancillas(m: u32) -> Result<u64> {
    if (1..=MAX_ANCILLAS).contains(&m) {
        Ok(1u64 << m)
    } else {
        Err(Error::AncillaCount(m, 1, MAX_ANCILLAS))
    }
}

fn check_angle(theta_a: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2).contains(&theta_a) {
        Ok(())
    } else {
        Err(Error::InvalidAngle(theta_a))
    }
}

/// Outcome distribution of the `m` ancillas, indexed by `y ∈ {0, …, 2^m − 1}`.
///
/// The Grover operator has eigenphases `±θ_a/π`, each carrying half of the
/// state, so `P[y] = ½ (F(y/M − θ_a/π) + F(y/M + θ_a/π))` with `F` the Fejér
/// kernel. This is mirror symmetric (`P[y] = P[M − y]`), and folding `y` onto
/// `ỹ = min(y, M − y)` gives `F(ỹ/M − θ_a/π) + F(ỹ/M + θ_a/π)` for interior
/// `ỹ`, which is the single-kernel expression evaluated at `y` plus its mirror.
pub fn qpe_distribution(theta_a: f64, m: u32) -> Result<Vec<f64>> {
    let big_m = check_ancillas(m)?;
    check_angle(theta_a)?;
    let mf = big_m as f64;
    let phase = theta_a / PI;
    Ok((0..big_m)
        .map(|y| {
            let w = y as f64 / mf;
            0.5 * (fejer_kernel(w - phase, mf) + fejer_kernel(w + phase, mf))
        })
        .collect())
}

/// Folds `y ∈ {0, …, M − 1}` onto the grid index `ỹ ∈ {0, …, M/2}`.
pub fn fold_outcome(y: u64, big_m: u64) -> u64 {
    if y <= big_m / 2 {
        y
    } else {
        big_m - y
    }
}

/// Distribution of the folded outcome `ỹ`, i.e. of the grid estimate
/// `sin²(π ỹ / M)`.
pub fn folded_qpe_distribution(theta_a: f64, m: u32) -> Result<Vec<f64>> {
    let probs = qpe_distribution(theta_a, m)?;
    Ok(fold_counts(&probs))
}

pub(crate) fn fold_counts<T: Copy + Default + std::ops::AddAssign>(values: &[T]) -> Vec<T> {
    let big_m = values.len() as u64;
    let mut folded = vec![T::default(); (big_m / 2 + 1) as usize];
    for (y, &v) in values.iter().enumerate() {
        folded[fold_outcome(y as u64, big_m) as usize] += v;
    }
    folded
}

/// Source of Grover measurements.
pub trait GroverSampler {
    /// Measures the marked qubit of `Q^k A |0⟩` `n_shots` times.
    fn sample_grover(&mut self, problem: &AmplitudeProblem, k: u64, n_shots: u64) -> Result<BinomialTally>;
}

/// Source of phase-estimation measurements.
pub trait QpeSampler {
    /// Measures the `m` ancillas `n_shots` times, returning counts per `y`.
    fn sample_qpe(&mut self, theta_a: f64, m: u32, n_shots: u64) -> Result<Vec<u64>>;
}

/// Seeded random stream (ChaCha8, 64-bit seed, 64-bit stream index).
///
/// A source is owned by exactly one run; concurrent runs derive their own
/// source from a master seed and a run index with [`RandomSource::derived`].
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::derived(seed, 0)
    }

    /// Independent stream `index` under `master` seed.
    pub fn derived(master: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master);
        rng.set_stream(index);
        Self {
            seed: master,
            stream: index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Exact `Binomial(n, p)` draw: CDF inversion for small `n`, BTPE above.
    pub fn binomial(&mut self, n: u64, p: f64) -> u64 {
        if n == 0 || p <= 0.0 {
            return 0;
        }
        if p >= 1.0 {
            return n;
        }
        if p > 0.5 {
            return n - self.binomial(n, 1.0 - p);
        }
        if n <= INVERSION_MAX_SHOTS {
            self.binomial_inversion(n, p)
        } else {
            Binomial::new(n, p).expect("p lies in (0, 1/2]").sample(&mut self.rng)
        }
    }

    fn binomial_inversion(&mut self, n: u64, p: f64) -> u64 {
        let u = self.uniform();
        let odds = p / (1.0 - p);
        let mut pmf = (1.0 - p).powi(n as i32);
        let mut cdf = pmf;
        for k in 0..n {
            if u < cdf {
                return k;
            }
            pmf *= odds * (n - k) as f64 / (k + 1) as f64;
            cdf += pmf;
        }
        n
    }

    /// Draws an index from a cumulative distribution (last entry ≈ 1).
    fn categorical(&mut self, cdf: &[f64]) -> usize {
        let total = *cdf.last().expect("nonempty distribution");
        let u = self.uniform() * total;
        cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
    }
}

impl GroverSampler for RandomSource {
    fn sample_grover(&mut self, problem: &AmplitudeProblem, k: u64, n_shots: u64) -> Result<BinomialTally> {
        sample_grover(problem, k, n_shots, self)
    }
}

impl QpeSampler for RandomSource {
    fn sample_qpe(&mut self, theta_a: f64, m: u32, n_shots: u64) -> Result<Vec<u64>> {
        sample_qpe(theta_a, m, n_shots, self)
    }
}

/// `n_shots` Bernoulli draws at the Grover success probability for power `k`.
pub fn sample_grover(
    problem: &AmplitudeProblem,
    k: u64,
    n_shots: u64,
    rng: &mut RandomSource,
) -> Result<BinomialTally> {
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let p = grover_success_prob(problem, k);
    BinomialTally::new(n_shots, rng.binomial(n_shots, p))
}

/// Multinomial draw of `n_shots` ancilla readouts.
pub fn sample_qpe(theta_a: f64, m: u32, n_shots: u64, rng: &mut RandomSource) -> Result<Vec<u64>> {
    let probs = qpe_distribution(theta_a, m)?;
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let cdf: Vec<f64> = probs
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..n_shots {
        counts[rng.categorical(&cdf)] += 1;
    }
    Ok(counts)
}

/// Deterministic oracle returning expected counts rounded to integers.
///
/// Grover tallies use `round(n p)`; phase-estimation counts use largest
/// remainder rounding so that they sum to `n_shots`. Used to check that the
/// estimators recover `a` exactly in the noise-free limit.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoiselessOracle;

impl GroverSampler for NoiselessOracle {
    fn sample_grover(&mut self, problem: &AmplitudeProblem, k: u64, n_shots: u64) -> Result<BinomialTally> {
        if n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        let p = grover_success_prob(problem, k);
        let ones = ((n_shots as f64) * p).round().clamp(0.0, n_shots as f64) as u64;
        BinomialTally::new(n_shots, ones)
    }
}

impl QpeSampler for NoiselessOracle {
    fn sample_qpe(&mut self, theta_a: f64, m: u32, n_shots: u64) -> Result<Vec<u64>> {
        let probs = qpe_distribution(theta_a, m)?;
        if n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        let n = n_shots as f64;
        let mut counts: Vec<u64> = probs.iter().map(|&p| (n * p).floor() as u64).collect();
        let assigned: u64 = counts.iter().sum();
        let mut order: Vec<usize> = (0..probs.len()).collect();
        order.sort_by(|&i, &j| {
            let ri = n * probs[i] - counts[i] as f64;
            let rj = n * probs[j] - counts[j] as f64;
            rj.total_cmp(&ri).then(i.cmp(&j))
        });
        for &i in order.iter().take(n_shots.saturating_sub(assigned) as usize) {
            counts[i] += 1;
        }
        Ok(counts)
    }
}

/// Error bound that canonical amplitude estimation meets with probability at
/// least `8/π²` from a single readout: `2π √(a(1−a)) / M + π² / M²`.
pub fn canonical_error_bound(a: f64, m: u32) -> Result<f64> {
    let big_m = check_ancillas(m)? as f64;
    Ok(2.0 * PI * (a * (1.0 - a)).sqrt() / big_m + PI * PI / (big_m * big_m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn amplitude_problem_validation() {
        assert!(AmplitudeProblem::new(-0.1).is_err());
        assert!(AmplitudeProblem::new(1.5).is_err());
        assert!(AmplitudeProblem::new(f64::NAN).is_err());
        let p = AmplitudeProblem::new(0.5).unwrap();
        assert!((p.theta_a() - PI / 4.0).abs() < 1e-15);
        assert!(AmplitudeProblem::from_theta(2.0).is_err());
    }

    #[test]
    fn grover_probability_examples() {
        let half = AmplitudeProblem::new(0.5).unwrap();
        assert!((grover_success_prob(&half, 0) - 0.5).abs() < 1e-15);
        let one = AmplitudeProblem::new(1.0).unwrap();
        assert!((grover_success_prob(&one, 7) - 1.0).abs() < 1e-15);
        // sin²(3 arcsin √0.3) = 0.972 (closed form: a(3 − 4a)² = 0.3 · 1.8²).
        let p = AmplitudeProblem::new(0.3).unwrap();
        assert!((grover_success_prob(&p, 1) - 0.972).abs() < 1e-14);
    }

    #[test]
    fn grover_probability_is_periodic_in_the_scaled_angle() {
        // θ = π/4 in f64; sin²((2k+1)θ) must stay at 1/2 for huge powers.
        let p = AmplitudeProblem::new(0.5).unwrap();
        for k in [10u64, 1_000, 123_456, 999_999] {
            assert!((grover_success_prob(&p, k) - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn sample_grover_degenerate_probabilities() {
        let mut rng = RandomSource::new(3);
        let zero = AmplitudeProblem::new(0.0).unwrap();
        let one = AmplitudeProblem::new(1.0).unwrap();
        for k in [0u64, 1, 17] {
            assert_eq!(sample_grover(&zero, k, 100, &mut rng).unwrap().ones(), 0);
            assert_eq!(sample_grover(&one, k, 100, &mut rng).unwrap().ones(), 100);
        }
        assert_eq!(sample_grover(&zero, 0, 0, &mut rng), Err(Error::ZeroShots));
    }

    #[test]
    fn sample_grover_concentrates() {
        let mut rng = RandomSource::new(11);
        let half = AmplitudeProblem::new(0.5).unwrap();
        let t = sample_grover(&half, 0, 1_000_000, &mut rng).unwrap();
        let f = t.frequency();
        assert!((0.4985..=0.5015).contains(&f), "{f}");
    }

    #[test]
    fn small_shot_inversion_has_correct_mean_and_variance() {
        let mut rng = RandomSource::new(5);
        let (n, p) = (20u64, 0.3);
        let draws: Vec<f64> = (0..200_000).map(|_| rng.binomial(n, p) as f64).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / draws.len() as f64;
        assert!((mean - 6.0).abs() < 0.03, "{mean}");
        assert!((var - 4.2).abs() < 0.06, "{var}");
    }

    #[test]
    fn seeded_streams_are_reproducible_and_distinct() {
        let p = AmplitudeProblem::new(0.37).unwrap();
        let draw = |mut rng: RandomSource| -> Vec<u64> {
            (0..50)
                .map(|k| sample_grover(&p, k, 100, &mut rng).unwrap().ones())
                .collect()
        };
        assert_eq!(draw(RandomSource::new(42)), draw(RandomSource::new(42)));
        assert_eq!(draw(RandomSource::derived(42, 7)), draw(RandomSource::derived(42, 7)));
        assert_ne!(draw(RandomSource::derived(42, 7)), draw(RandomSource::derived(42, 8)));
        assert_ne!(draw(RandomSource::new(42)), draw(RandomSource::new(43)));
    }

    #[test]
    fn qpe_distribution_half_amplitude_one_ancilla() {
        let d = qpe_distribution(PI / 4.0, 1).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn qpe_distribution_on_grid_is_point_mass_after_folding() {
        for m in 1..=8u32 {
            let big_m = 1u64 << m;
            for y_star in 0..=big_m / 2 {
                let theta = PI * y_star as f64 / big_m as f64;
                let d = qpe_distribution(theta.min(FRAC_PI_2), m).unwrap();
                for (y, &p) in d.iter().enumerate() {
                    if fold_outcome(y as u64, big_m) != y_star {
                        assert!(p < 1e-12, "m={m} y*={y_star} y={y} p={p}");
                    }
                }
                let folded = folded_qpe_distribution(theta.min(FRAC_PI_2), m).unwrap();
                assert!((folded[y_star as usize] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn qpe_distribution_range_checks() {
        assert!(qpe_distribution(0.3, 0).is_err());
        assert!(qpe_distribution(0.3, 31).is_err());
        assert!(qpe_distribution(-0.1, 3).is_err());
        assert!(qpe_distribution(1.6, 3).is_err());
    }

    #[test]
    fn sample_qpe_on_grid_and_conservation() {
        let mut rng = RandomSource::new(9);
        let theta = PI * 3.0 / 16.0;
        let counts = sample_qpe(theta, 4, 50, &mut rng).unwrap();
        let folded = fold_counts(&counts);
        assert_eq!(folded[3], 50);

        let p = AmplitudeProblem::new(0.3).unwrap();
        let counts = sample_qpe(p.theta_a(), 3, 25, &mut rng).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), 25);
    }

    #[test]
    fn sample_qpe_frequencies_follow_distribution() {
        let mut rng = RandomSource::new(21);
        let theta = PI / 4.0;
        let n = 100_000u64;
        let counts = sample_qpe(theta, 4, n, &mut rng).unwrap();
        let probs = qpe_distribution(theta, 4).unwrap();
        for (c, p) in counts.iter().zip(&probs) {
            assert!((*c as f64 / n as f64 - p).abs() < 0.01);
        }
    }

    #[test]
    fn noiseless_oracle_counts() {
        let mut oracle = NoiselessOracle;
        let p = AmplitudeProblem::new(0.3).unwrap();
        let t = oracle.sample_grover(&p, 1, 1000).unwrap();
        assert_eq!(t.ones(), 972);
        let counts = oracle.sample_qpe(p.theta_a(), 3, 12_345).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), 12_345);
    }

    #[test]
    fn canonical_bound_values() {
        let b = canonical_error_bound(0.5, 3).unwrap();
        assert!((b - (PI / 8.0 + PI * PI / 64.0)).abs() < 1e-15);
        assert!(canonical_error_bound(0.5, 0).is_err());
    }

    proptest! {
        #[test]
        fn qpe_distribution_normalized(theta in 0.0f64..=FRAC_PI_2, m in 1u32..=10) {
            let total: f64 = qpe_distribution(theta, m).unwrap().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
        }

        #[test]
        fn qpe_distribution_mirror_symmetric(theta in 0.0f64..=FRAC_PI_2, m in 1u32..=10) {
            let d = qpe_distribution(theta, m).unwrap();
            let big_m = d.len();
            for y in 1..big_m {
                if y != big_m / 2 {
                    prop_assert!((d[y] - d[big_m - y]).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn binomial_draws_within_range(n in 1u64..500, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let mut rng = RandomSource::new(seed);
            prop_assert!(rng.binomial(n, p) <= n);
        }
    }
}
