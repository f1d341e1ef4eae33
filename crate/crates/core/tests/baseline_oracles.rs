//! Baseline estimators against dense-grid scans and statistical claims.

use std::f64::consts::{FRAC_PI_2, PI};

use iqae::baselines::{mlae_estimate, mlae_loglik, qae_loglik, run_mc, run_mlae, run_qae_mle, ScheduleRecord};
use iqae::confint::{chi2_quantile_1dof, BinomialTally};
use iqae::oracle::{AmplitudeProblem, RandomSource};

const DENSE: usize = 1_000_000;

/// Maximizer of `f` over `n` evenly spaced points of `[0, π/2]`.
fn dense_argmax(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    (0..n)
        .map(|j| FRAC_PI_2 * j as f64 / (n - 1) as f64)
        .map(|x| (x, f(x)))
        .fold((0.0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
        .0
}

fn sin2(x: f64) -> f64 {
    x.sin().powi(2)
}

fn record(k: u64, shots: u64, ones: u64) -> ScheduleRecord {
    ScheduleRecord {
        k,
        tally: BinomialTally::new(shots, ones).unwrap(),
    }
}

#[test]
fn mlae_two_records_match_dense_grid() {
    let recs = vec![record(1, 100, 62), record(2, 100, 17)];
    let res = mlae_estimate(recs.clone(), 0.05, 100_000).unwrap();
    let grid = dense_argmax(|t| mlae_loglik(t, &recs), DENSE);
    assert!((res.theta_hat - grid).abs() < 1e-6, "{} vs {grid}", res.theta_hat);
}

#[test]
fn mlae_interval_matches_dense_level_set() {
    let recs = vec![record(1, 100, 70)];
    let res = mlae_estimate(recs.clone(), 0.05, 100_000).unwrap();
    let level = mlae_loglik(res.theta_hat, &recs) - chi2_quantile_1dof(0.95).unwrap() / 2.0;
    let inside: Vec<f64> = (0..DENSE)
        .map(|j| FRAC_PI_2 * j as f64 / (DENSE - 1) as f64)
        .filter(|&t| mlae_loglik(t, &recs) >= level)
        .collect();
    let lo = sin2(*inside.first().unwrap());
    let hi = sin2(*inside.last().unwrap());
    let step = FRAC_PI_2 / (DENSE - 1) as f64;
    assert!(res.interval.contains(res.estimate));
    assert!(
        (res.interval.lo() - lo).abs() < 2.0 * step,
        "{} vs {lo}",
        res.interval.lo()
    );
    assert!(
        (res.interval.hi() - hi).abs() < 2.0 * step,
        "{} vs {hi}",
        res.interval.hi()
    );
}

#[test]
fn mlae_mle_matches_dense_grid_on_random_instances() {
    for seed in 0..50u64 {
        let mut rng = RandomSource::derived(77, seed);
        let a = rng.uniform();
        // One power leaves aliased maxima of equal height, so schedules
        // start at two powers here; the single-power case is checked below.
        let m = 2 + (seed % 5) as u32;
        let res = run_mlae(&AmplitudeProblem::new(a).unwrap(), m, 50, 0.05, &mut rng).unwrap();
        let grid = dense_argmax(|t| mlae_loglik(t, &res.records), DENSE);
        assert!(
            (res.estimate - sin2(grid)).abs() < 1e-6,
            "seed={seed} {} vs {}",
            res.estimate,
            sin2(grid)
        );
        assert!(res.interval.contains(res.estimate));
    }
}

#[test]
fn mlae_single_power_reaches_the_grid_maximum() {
    for seed in 0..20u64 {
        let mut rng = RandomSource::derived(79, seed);
        let a = rng.uniform();
        let res = run_mlae(&AmplitudeProblem::new(a).unwrap(), 1, 50, 0.05, &mut rng).unwrap();
        let grid = dense_argmax(|t| mlae_loglik(t, &res.records), DENSE);
        let best = mlae_loglik(res.theta_hat, &res.records);
        assert!(best >= mlae_loglik(grid, &res.records) - 1e-9, "seed={seed}");
        // Every maximizer reproduces the observed frequency at K = 3.
        let freq = res.records[0].tally.frequency();
        assert!((sin2(3.0 * res.theta_hat) - freq).abs() < 1e-6);
    }
}

#[test]
fn qae_mle_matches_dense_grid_on_random_instances() {
    for seed in 0..50u64 {
        let mut rng = RandomSource::derived(78, seed);
        let a = rng.uniform();
        let m = 2 + (seed % 5) as u32;
        let res = run_qae_mle(&AmplitudeProblem::new(a).unwrap(), m, 100, 0.05, &mut rng).unwrap();
        let grid = dense_argmax(|t| qae_loglik(t, &res.samples), DENSE);
        assert!(
            (res.mle_estimate - sin2(grid)).abs() < 1e-6,
            "seed={seed} a={a} m={m} {} vs {}",
            res.mle_estimate,
            sin2(grid)
        );
        assert!(res.interval.contains(res.mle_estimate));
    }
}

#[test]
fn qae_grid_estimate_exact_with_canonical_probability() {
    // a = sin²(π·3/16) lies on the grid for m = 4; one readout per run.
    let m = 4;
    let a = sin2(PI * 3.0 / 16.0);
    let problem = AmplitudeProblem::new(a).unwrap();
    let runs = 1000;
    let hits = (0..runs)
        .filter(|&i| {
            let res = run_qae_mle(&problem, m, 1, 0.05, &mut RandomSource::derived(5, i)).unwrap();
            (res.grid_estimate - a).abs() < 1e-12
        })
        .count();
    assert!(hits as f64 / runs as f64 >= 8.0 / (PI * PI), "{hits}");
}

#[test]
fn qae_mle_beats_grid_estimate_mostly() {
    let problem = AmplitudeProblem::new(0.3).unwrap();
    let runs = 1000;
    let wins = (0..runs)
        .filter(|&i| {
            let res = run_qae_mle(&problem, 3, 25, 0.05, &mut RandomSource::derived(6, i)).unwrap();
            (res.mle_estimate - 0.3).abs() < (res.grid_estimate - 0.3).abs()
        })
        .count();
    assert!(wins as f64 / runs as f64 >= 0.6, "{wins}");
}

#[test]
fn mlae_beats_monte_carlo_at_equal_budget() {
    let problem = AmplitudeProblem::new(0.5).unwrap();
    let (mut mlae_err, mut mc_err) = (0.0, 0.0);
    for i in 0..100 {
        let mut rng = RandomSource::derived(9, i);
        let mlae = run_mlae(&problem, 5, 100, 0.05, &mut rng).unwrap();
        let mc = run_mc(&problem, mlae.n_oracle, 0.05, &mut rng).unwrap();
        mlae_err += (mlae.estimate - 0.5).abs();
        mc_err += (mc.estimate - 0.5).abs();
    }
    assert!(mlae_err < mc_err, "{mlae_err} vs {mc_err}");
}

#[test]
fn monte_carlo_width_scales_as_inverse_root() {
    let problem = AmplitudeProblem::new(0.3).unwrap();
    let mut rng = RandomSource::new(10);
    let points: Vec<(f64, f64)> = [100u64, 1_000, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&n| {
            let w = run_mc(&problem, n, 0.05, &mut rng).unwrap().interval.width();
            ((n as f64).ln(), w.ln())
        })
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((slope + 0.5).abs() <= 0.05, "{slope}");
}
