//! Simulation checks of the samplers against known transforms of their laws.

use umean::seed::rng_from_seed;
use umean::{ci_original, ci_transformed, u_mean, Model, Transform};

/// Sample mean and standard error of `f(X)` over `n` draws.
fn mc_mean(model: &Model, n: usize, seed: u64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let x = model.sample(n, seed).unwrap();
    let v: Vec<f64> = x.iter().map(|&x| f(x)).collect();
    let m = v.iter().sum::<f64>() / n as f64;
    let var = v.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (m, (var / n as f64).sqrt())
}

fn within(m: f64, se: f64, truth: f64, k: f64) -> bool {
    (m - truth).abs() <= k * se
}

#[test]
fn first_passage_laplace_transform() {
    let fp = Model::first_passage(1.0).unwrap();
    let (m, se) = mc_mean(&fp, 1_000_000, 2024, |t| (-t).exp());
    let truth = (-(2f64.sqrt())).exp();
    assert!(within(m, se, truth, 4.0), "{m} +- {se} vs {truth}");
}

#[test]
fn stable_laplace_transform() {
    for (alpha, seed) in [(0.3, 1), (0.5, 2), (0.8, 3)] {
        let st = Model::positive_stable(alpha).unwrap();
        for b in [0.5, 2.0] {
            let (m, se) = mc_mean(&st, 200_000, seed, |x| (-b * x).exp());
            let truth = (-b.powf(alpha)).exp();
            assert!(within(m, se, truth, 4.0), "alpha {alpha} b {b}: {m} +- {se}");
        }
    }
}

#[test]
fn stable_half_agrees_with_first_passage() {
    let st = Model::positive_stable(0.5).unwrap();
    let fp = Model::first_passage(std::f64::consts::FRAC_1_SQRT_2).unwrap();
    for b in [0.1, 1.0, 10.0] {
        let (a, sa) = mc_mean(&st, 200_000, 7, |x| (-b * x).exp());
        let (c, sc) = mc_mean(&fp, 200_000, 8, |x| (-b * x).exp());
        assert!((a - c).abs() <= 4.0 * (sa * sa + sc * sc).sqrt(), "b {b}: {a} vs {c}");
    }
}

#[test]
fn half_t_kernel_mean() {
    for (nu, b) in [(1.5, 0.5), (2.0, 1.0), (5.0, 2.0)] {
        let model = Model::half_student_t(nu).unwrap();
        let t = Transform::student_kernel(b, nu).unwrap();
        let truth = model.u_moments(&t).unwrap().mean;
        let (m, se) = mc_mean(&model, 200_000, 5, |x| t.forward(x).unwrap());
        assert!(within(m, se, truth, 4.0), "nu {nu} b {b}: {m} vs {truth}");
    }
}

#[test]
fn power_law_harmonic_mean() {
    let (m, se) = mc_mean(&Model::PowerLawOnUnit, 200_000, 9, f64::recip);
    assert!(within(m, se, 2.0 / 3.0, 4.0));
}

#[test]
fn pareto_quantiles_follow_the_cdf() {
    let x = Model::pareto(0.5).unwrap().sample(100_000, 10).unwrap();
    let below_median = x.iter().filter(|&&v| v <= 3.0).count() as f64 / x.len() as f64;
    assert!((below_median - 0.5).abs() < 4.0 * (0.25f64 / 1e5).sqrt());
}

#[test]
fn transformed_mean_is_unbiased() {
    // E[(1+X)^-1] = 1/3 for Pareto(0.5).
    let t = Transform::reciprocal_power(1.0).unwrap();
    let model = Model::pareto(0.5).unwrap();
    let reps = 200;
    let ubars: Vec<f64> = (0..reps)
        .map(|r| {
            let x = model.sample(1000, 500 + r).unwrap();
            u_mean(&t, &x).unwrap().transformed_mean()
        })
        .collect();
    let m = ubars.iter().sum::<f64>() / reps as f64;
    let sd = (ubars.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
    assert!(within(m, sd / (reps as f64).sqrt(), 1.0 / 3.0, 4.0), "{m}");
}

#[test]
fn interval_coverage_is_near_nominal() {
    let t = Transform::reciprocal_power(1.0).unwrap();
    let model = Model::pareto(0.5).unwrap();
    let reps = 400;
    let hits = (0..reps)
        .filter(|&r| {
            let x = model.sample(500, 9000 + r).unwrap();
            let est = u_mean(&t, &x).unwrap();
            ci_original(&t, &ci_transformed(&est, 0.95).unwrap())
                .unwrap()
                .contains(2.0)
        })
        .count();
    let coverage = hits as f64 / reps as f64;
    // Binomial sd at 400 draws is about 0.011.
    assert!((0.91..=0.985).contains(&coverage), "{coverage}");
}

#[test]
fn same_seed_same_sample() {
    let m = Model::log_student_t(14.0, 12.74, 2.81).unwrap();
    assert_eq!(m.sample(50, 3).unwrap(), m.sample(50, 3).unwrap());
    assert_ne!(m.sample(50, 3).unwrap(), m.sample(50, 4).unwrap());
    let mut rng = rng_from_seed(3);
    assert_eq!(m.sample_with(&mut rng, 50), m.sample(50, 3).unwrap().into_inner());
}
