mod common;

use common::{naive_q, pm_design};
use crows::bounds::{certify, identity_check, theorem1_bound, Certificate};
use crows::construct::{init_with_rule, InitRule};
use crows::row_slack;
use proptest::prelude::*;

/// `tr((X'X)^2)` by explicit matrix products.
fn trace_gram_squared(d: &crows::Design) -> i64 {
    let (n, k) = (d.n(), d.k());
    let g: Vec<Vec<i64>> =
        (0..k).map(|a| (0..k).map(|b| (0..n).map(|i| i64::from(d.get(i, a) * d.get(i, b))).sum()).collect()).collect();
    (0..k).map(|a| (0..k).map(|b| g[a][b] * g[b][a]).sum::<i64>()).sum()
}

#[test]
fn paper_constants_for_96_144_10() {
    let r = theorem1_bound(96, 144, 10).unwrap();
    assert_eq!((r.gamma, r.delta, r.phi, r.psi), (6, 96, 12, 10176));
}

#[test]
fn bound_examples() {
    let r = theorem1_bound(4, 4, 1).unwrap();
    assert_eq!((r.gamma, r.delta, r.phi, r.psi, r.q_lb), (1, 0, 2, 0, 112));
    assert_eq!(r.ue_lb, 0.8);
    let r = theorem1_bound(2, 2, 2).unwrap();
    assert_eq!((r.gamma, r.delta, r.phi, r.psi, r.q_lb), (2, 0, 0, 0, 36));
    assert_eq!(r.ue_lb, 2.0);
}

#[test]
fn random_tight_designs_respect_the_bound() {
    let mut checked = 0;
    for n in [3usize, 6, 10, 17] {
        for k in [4usize, 9, 15, 22] {
            for c in [1usize, 2, k / 3 + 1, k / 2, k - 1] {
                let c = c.clamp(1, k);
                let report = theorem1_bound(n, k, c).unwrap();
                for s in 0..13u64 {
                    let d = init_with_rule(n, k, c, s * 1000 + c as u64, InitRule::Tight).unwrap();
                    assert!(row_slack(&d).unwrap().is_tight());
                    let q = naive_q(&d);
                    assert!(q >= report.q_lb, "n={n} k={k} c={c} seed={s}: Q={q} below {}", report.q_lb);
                    match certify(&d, &report).unwrap() {
                        Certificate::Tight { gap_q, .. } => assert_eq!(gap_q, q - report.q_lb),
                        other => panic!("tight design not certified: {other:?}"),
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identities_hold_for_every_pm_matrix(d in pm_design(1..=25, 1..=25)) {
        prop_assert!(identity_check(&d).all_zero());
    }

    #[test]
    fn q_splits_into_gram_trace_and_margins(d in pm_design(1..=20, 1..=20)) {
        // Q = tr((X'X)^2) + 2 ||X'1||^2 + n^2
        let n = d.n() as i64;
        let colsum_sq: i64 = (0..d.k()).map(|j| (0..d.n()).map(|i| i64::from(d.get(i, j))).sum::<i64>().pow(2)).sum();
        prop_assert_eq!(naive_q(&d), trace_gram_squared(&d) + 2 * colsum_sq + n * n);
    }
}
