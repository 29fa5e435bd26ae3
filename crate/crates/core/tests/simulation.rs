use crows::sim::{
    desk, evaluate, gen_interaction_response, gen_response, pilot_draw, prepare, run_cell, run_study, Heredity,
    Interaction, InteractionKind, InteractionSign, Method, Scenario, StudyConfig,
};
use crows::Design;

/// The four parent cells `(x_p, x_r)` in rows, plus an idle third column.
fn parent_cells() -> Design {
    Design::from_rows(&[vec![-1, -1, -1], vec![1, -1, -1], vec![-1, 1, -1], vec![1, 1, -1]], 2).unwrap()
}

/// `c0 + (D/2)(x_p + x_r) + g x_p x_r`, with `c0` fixed so the `(-1, -1)` cell sits at `mu`.
fn cell_mean_oracle(mu: f64, d: f64, g: f64, xp: f64, xr: f64) -> f64 {
    let c0 = mu + d - g;
    c0 + d / 2.0 * (xp + xr) + g * xp * xr
}

#[test]
fn strong_heredity_cell_means() {
    let (mu, d) = (5.0, 2.0);
    for (sign, g, table) in [
        (InteractionSign::Synergistic, d / 4.0, [5.0, 6.0, 6.0, 9.0]),
        (InteractionSign::Antagonistic, -d / 4.0, [5.0, 8.0, 8.0, 9.0]),
    ] {
        let mut s = Scenario::new(mu, 1.0, d, vec![0, 1]);
        s.interaction = Some(Interaction { pair: (0, 1), kind: InteractionKind { heredity: Heredity::Strong, sign } });
        let means = s.mean_response(&parent_cells()).unwrap();
        let cells = [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)];
        for ((m, (xp, xr)), t) in means.iter().zip(cells).zip(table) {
            assert!((m - cell_mean_oracle(mu, d, g, xp, xr)).abs() < 1e-12);
            assert!((m - t).abs() < 1e-12, "{sign:?} cell ({xp},{xr}): {m} vs {t}");
        }
    }
}

#[test]
fn main_effect_means_differ_by_d() {
    let s = Scenario::new(2.0, 1.5, 3.0, vec![1]);
    let means = s.mean_response(&parent_cells()).unwrap();
    assert_eq!(means, vec![2.0, 2.0, 6.5, 6.5]);
    let none = Scenario::new(2.0, 1.5, 3.0, vec![]);
    assert_eq!(none.mean_response(&parent_cells()).unwrap(), vec![2.0; 4]);
}

#[test]
fn interaction_free_scenario_matches_plain_generator() {
    let s = Scenario::new(0.0, 1.0, 2.0, vec![2]);
    let d = parent_cells();
    assert_eq!(gen_response(&d, &s, 3).unwrap(), gen_response(&d, &s, 3).unwrap());
    assert!(gen_interaction_response(&d, &s, 3).is_err());
}

#[test]
fn pilot_moments() {
    let (mu, sigma, reps) = (3.0, 2.0, 100_000u64);
    let draws: Vec<_> = (0..reps).map(|r| pilot_draw(mu, sigma, r).unwrap()).collect();
    let mean = draws.iter().map(|p| p.mean).sum::<f64>() / reps as f64;
    let var = draws.iter().map(|p| p.variance).sum::<f64>() / reps as f64;
    // sd of the sample mean is sigma / sqrt(12); of S^2 it is sigma^2 sqrt(2 / 11)
    let se_mean = sigma / 12f64.sqrt() / (reps as f64).sqrt();
    let se_var = sigma * sigma * (2.0f64 / 11.0).sqrt() / (reps as f64).sqrt();
    assert!((mean - mu).abs() <= 3.0 * se_mean, "mean {mean}");
    assert!((var - sigma * sigma).abs() <= 3.0 * se_var, "variance {var}");
    let limit = pilot_draw(mu, 0.0, 1).unwrap();
    assert_eq!((limit.mean, limit.variance), (mu, 0.0));
}

#[test]
fn rates_by_counting() {
    let r = evaluate(&[2, 4], &[2], 11);
    assert_eq!((r.tpr, r.fpr), (1.0, 0.1));
    let r = evaluate(&[], &[2], 10);
    assert_eq!((r.tpr, r.fpr), (0.0, 0.0));
}

#[test]
fn single_cell_reruns_match_the_full_study() {
    let presets: Vec<_> = desk().into_iter().filter(|p| p.name == "n24-k31-c10").collect();
    let mut cfg = StudyConfig::new(presets.clone(), vec![Method::Crows, Method::PoolHits, Method::Ocow], vec![1.0, 3.0], 30, 5);
    cfg.crows_starts = 5;
    let full = run_study(&cfg).unwrap();
    assert_eq!(full.rows.len(), 6);
    let designs = prepare(&presets[0], &cfg).unwrap();
    for method in [Method::PoolHits, Method::Crows] {
        let alone = run_cell(&cfg, &presets[0], &designs, method, 3.0).unwrap();
        assert_eq!(&alone, full.find(method, "n24-k31-c10", 3.0).unwrap());
    }
    cfg.replicates = 0;
    assert!(run_study(&cfg).unwrap().rows.is_empty());
}

#[test]
fn known_parameter_rates_do_not_depend_on_units() {
    let presets: Vec<_> = desk().into_iter().filter(|p| p.name == "n24-k31-c5").collect();
    let mut a = StudyConfig::new(presets, vec![Method::PoolHits, Method::Ocow, Method::Crows], vec![2.0], 20, 9);
    a.crows_starts = 5;
    let mut b = a.clone();
    b.mu = 40.0;
    b.sigma = 7.0;
    let (ra, rb) = (run_study(&a).unwrap(), run_study(&b).unwrap());
    for (x, y) in ra.rows.iter().zip(&rb.rows) {
        assert_eq!((x.tpr, x.fpr), (y.tpr, y.fpr), "{:?}", x.method);
    }
}
