#![allow(dead_code)]

use crows::Design;
use proptest::prelude::*;

/// `Q = tr(S^2)` with `S = L'L`, computed from scratch with plain loops.
pub fn naive_q(d: &Design) -> i64 {
    let l = |i: usize, a: usize| if a == 0 { 1i64 } else { i64::from(d.get(i, a - 1)) };
    let dim = d.k() + 1;
    let mut q = 0;
    for a in 0..dim {
        for b in 0..dim {
            let s: i64 = (0..d.n()).map(|i| l(i, a) * l(i, b)).sum();
            q += s * s;
        }
    }
    q
}

/// `sum_{a<b} s_ab^2` over the entries of `S`.
pub fn naive_upper_sum(d: &Design) -> i64 {
    let l = |i: usize, a: usize| if a == 0 { 1i64 } else { i64::from(d.get(i, a - 1)) };
    let dim = d.k() + 1;
    let mut total = 0;
    for a in 0..dim {
        for b in a + 1..dim {
            let s: i64 = (0..d.n()).map(|i| l(i, a) * l(i, b)).sum();
            total += s * s;
        }
    }
    total
}

pub fn design_from(n: usize, k: usize, entries: Vec<i8>) -> Design {
    let c = (0..n).map(|i| entries[i * k..(i + 1) * k].iter().filter(|&&v| v == 1).count()).max().unwrap_or(0).max(1);
    Design::new(n, k, c.min(k), entries).unwrap()
}

/// Arbitrary `±1` matrix with `n, k` in the given ranges.
pub fn pm_design(n: std::ops::RangeInclusive<usize>, k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Design> {
    (n, k).prop_flat_map(|(n, k)| {
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n * k).prop_map(move |e| design_from(n, k, e))
    })
}

/// `1 - Phi(z)` by Simpson integration of the density, independent of the
/// library's own error-function route.
pub fn upper_tail(z: f64) -> f64 {
    let upper = 12.0f64;
    if z >= upper {
        return 0.0;
    }
    let steps = 20_000;
    let h = (upper - z) / steps as f64;
    let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = f(z) + f(upper);
    for i in 1..steps {
        s += f(z + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}
