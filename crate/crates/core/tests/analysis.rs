use crows::analyze::{
    analyze, center_scale, fit_path, lasso_path, lenth_pse, ols_with_intercept, AnalyzeOptions, CdOptions, GridSpec,
};
use crows::construct::{construct, ConstructConfig};
use crows::seed::rng;
use crows::sim::{gen_response, Scenario};
use crows::{Design, Direction};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn random_pm(n: usize, k: usize, seed: u64) -> Design {
    let mut r = rng(seed);
    let e: Vec<i8> = (0..n * k).map(|_| if r.random::<bool>() { 1 } else { -1 }).collect();
    Design::new(n, k, k, e).unwrap()
}

fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.sample(StandardNormal)).collect()
}

/// Largest KKT violation, recomputed from the raw columns.
fn kkt_violation(cols: &[Vec<f64>], y: &[f64], beta: &[f64], lambda: f64) -> f64 {
    let n = y.len() as f64;
    let resid: Vec<f64> =
        (0..y.len()).map(|i| cols.iter().zip(beta).map(|(c, b)| c[i] * b).sum::<f64>() - y[i]).collect();
    let mut worst: f64 = 0.0;
    for (c, &b) in cols.iter().zip(beta) {
        let g = c.iter().zip(&resid).map(|(x, r)| x * r).sum::<f64>() / n;
        let v = if b == 0.0 { (g.abs() - lambda).max(0.0) } else { (g + lambda * b.signum()).abs() };
        worst = worst.max(v);
    }
    worst
}

#[test]
fn kkt_holds_along_random_paths() {
    let shapes = [(10, 5), (12, 12), (15, 20), (20, 25), (24, 31), (30, 40)];
    for (t, &(n, k)) in shapes.iter().enumerate() {
        for s in 0..4u64 {
            let d = random_pm(n, k, 100 + s + 10 * t as u64);
            let y = normals(n, 900 + s);
            let std = center_scale(&d, &y).unwrap();
            let path = lasso_path(&std, &GridSpec::default(), CdOptions::default()).unwrap();
            for (lambda, beta) in path.lambdas.iter().zip(&path.coefs) {
                let v = kkt_violation(&std.cols, &std.y_c, beta, *lambda);
                assert!(v <= 1e-6, "{n}x{k} seed {s}: violation {v:e} at lambda {lambda:e}");
            }
        }
    }
}

#[test]
fn orthogonal_columns_give_soft_thresholds() {
    // columns of an 8-run Hadamard matrix, so X'X / n = I
    let h = |i: usize, j: usize| if (i & j).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    let cols: Vec<Vec<f64>> = (1..8).map(|j| (0..8).map(|i| h(i, j)).collect()).collect();
    let mut y = normals(8, 5);
    let m = y.iter().sum::<f64>() / 8.0;
    y.iter_mut().for_each(|v| *v -= m);
    let lambdas = [0.9, 0.5, 0.2, 0.05, 0.0];
    let path = fit_path(&cols, &y, &lambdas, CdOptions::default());
    for (lambda, beta) in lambdas.iter().zip(&path.coefs) {
        for (c, b) in cols.iter().zip(beta) {
            let z = c.iter().zip(&y).map(|(x, y)| x * y).sum::<f64>() / 8.0;
            let expect = z.signum() * (z.abs() - lambda).max(0.0);
            assert!((b - expect).abs() <= 1e-8, "lambda {lambda}: {b} vs {expect}");
        }
    }

    let x = vec![vec![1.0, 1.0, -1.0, -1.0]];
    let p = fit_path(&x, &[2.0, 2.0, -2.0, -2.0], &[0.5], CdOptions::default());
    assert!((p.coefs[0][0] - 1.5).abs() < 1e-12);
}

fn planted_design() -> Design {
    construct(&ConstructConfig::new(24, 31, 10).starts(20).seed(11)).unwrap().best.into_design()
}

#[test]
fn planted_factor_seven_is_found() {
    let design = planted_design();
    let scenario = Scenario::new(0.0, 1.0, 4.0, vec![6]);
    for seed in 0..5u64 {
        let y = gen_response(&design, &scenario, seed).unwrap();

        // best single-factor regression
        let rss: Vec<f64> = (0..31)
            .map(|j| {
                let col: Vec<f64> = (0..24).map(|i| f64::from(design.get(i, j))).collect();
                ols_with_intercept(&[&col], &y).rss
            })
            .collect();
        let best = (0..31).min_by(|&a, &b| rss[a].total_cmp(&rss[b])).unwrap();
        assert_eq!(best, 6);

        let result = analyze(&design, &y, &AnalyzeOptions::new(1.0, Direction::Positive)).unwrap();
        assert!(result.hits.contains(&6), "seed {seed}: hits {:?}", result.hits);
        let at = result.hits.iter().position(|&j| j == 6).unwrap();
        assert!((result.estimates[at] - 2.0).abs() < 1.5, "half-effect estimate {}", result.estimates[at]);
    }
}

#[test]
fn negating_the_response_mirrors_the_direction() {
    let design = planted_design();
    let mut scenario = Scenario::new(3.0, 1.0, 3.0, vec![2]);
    scenario.direction = Direction::Negative;
    let y = gen_response(&design, &scenario, 8).unwrap();
    let neg = analyze(&design, &y, &AnalyzeOptions::new(1.0, Direction::Negative)).unwrap();
    let flipped: Vec<f64> = y.iter().map(|v| -v).collect();
    let pos = analyze(&design, &flipped, &AnalyzeOptions::new(1.0, Direction::Positive)).unwrap();
    assert_eq!(neg.hits, pos.hits);
    assert!(neg.hits.contains(&2));
}

#[test]
fn constant_response_has_no_hits() {
    let design = planted_design();
    let r = analyze(&design, &[4.0; 24], &AnalyzeOptions::new(1.0, Direction::Positive)).unwrap();
    assert!(r.hits.is_empty());
}

#[test]
fn lenth_examples() {
    assert_eq!(lenth_pse(&[1.0, 1.0, 1.0, 1.0, 100.0]).unwrap().pse, 1.5);
    assert_eq!(lenth_pse(&[-2.0, 2.0, 2.0, -2.0]).unwrap().pse, 3.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hits_are_invariant_to_affine_rescaling(seed in 0u64..1000, scale in 0.1f64..20.0, shift in -50.0f64..50.0) {
        let design = random_pm(16, 20, seed);
        let y = gen_response(&design, &Scenario::new(0.0, 1.0, 3.0, vec![(seed % 20) as usize]), seed).unwrap();
        let base = analyze(&design, &y, &AnalyzeOptions::new(1.0, Direction::Positive)).unwrap();
        let moved: Vec<f64> = y.iter().map(|v| scale * v + shift).collect();
        let other = analyze(&design, &moved, &AnalyzeOptions::new(scale, Direction::Positive)).unwrap();
        prop_assert_eq!(base.hits, other.hits);
    }

    #[test]
    fn refit_residuals_are_orthogonal(seed in 0u64..1000, p in 1usize..6) {
        let d = random_pm(15, p, seed);
        let cols: Vec<Vec<f64>> = (0..p).map(|j| (0..15).map(|i| f64::from(d.get(i, j))).collect()).collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        let y = normals(15, seed + 1);
        let fit = ols_with_intercept(&refs, &y);
        prop_assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-9);
        for c in &cols {
            prop_assert!(c.iter().zip(&fit.residuals).map(|(x, r)| x * r).sum::<f64>().abs() < 1e-9);
        }
        prop_assert!((fit.residuals.iter().map(|r| r * r).sum::<f64>() - fit.rss).abs() < 1e-9);
    }
}
