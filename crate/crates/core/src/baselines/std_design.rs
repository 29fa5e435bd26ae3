//! Shifted transversal designs.
//!
//! Compound `x` with base-`q` digits `(d_0, ..., d_Gamma)` is read as the
//! polynomial `d_0 + d_1 t + ... + d_Gamma t^Gamma` over `GF(q)`. Layer
//! `j < q` puts it in pool `p(j) mod q`; the optional layer `j = q` uses the
//! leading digit. Two distinct polynomials of degree at most `Gamma` agree in
//! at most `Gamma` layers, which is what the decoder relies on.

use serde::Serialize;

use crate::design::Design;
use crate::error::{param, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StDesign {
    pub k: usize,
    pub q: usize,
    pub a: usize,
    pub gamma: usize,
    /// `assignment[layer][compound]` is the pool index within the layer.
    pub assignment: Vec<Vec<usize>>,
}

pub fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

impl StDesign {
    pub fn wells(&self) -> usize {
        self.a * self.q
    }

    /// Well index of compound `x` in `layer`.
    pub fn well(&self, layer: usize, x: usize) -> usize {
        layer * self.q + self.assignment[layer][x]
    }

    pub fn pool_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.wells()];
        for layer in 0..self.a {
            for x in 0..self.k {
                sizes[self.well(layer, x)] += 1;
            }
        }
        sizes
    }

    /// Incidence matrix in `±1` coding (`+1` = compound present), with the row
    /// constraint set to the largest pool.
    pub fn to_design(&self) -> Design {
        let wells = self.wells();
        let mut entries = vec![-1i8; wells * self.k];
        for layer in 0..self.a {
            for x in 0..self.k {
                entries[self.well(layer, x) * self.k + x] = 1;
            }
        }
        let c = self.pool_sizes().into_iter().max().unwrap_or(1).max(1);
        Design::new(wells, self.k, c, entries).expect("shape is consistent by construction")
    }

    /// Number of layers in which compounds `x` and `y` share a pool.
    pub fn co_occurrences(&self, x: usize, y: usize) -> usize {
        self.assignment.iter().filter(|layer| layer[x] == layer[y]).count()
    }
}

/// Builds an STD, optionally checking every pool against a capacity `c`.
pub fn std_design(k: usize, q: usize, a: usize, gamma: usize, capacity: Option<usize>) -> Result<StDesign> {
    if k == 0 {
        return param("an STD needs at least one compound");
    }
    if !is_prime(q) {
        return param(format!("q = {q} is not prime"));
    }
    if a == 0 || a > q + 1 {
        return param(format!("layer count a = {a} must satisfy 1 <= a <= q + 1 = {}", q + 1));
    }
    let cap = (q as u128).checked_pow(gamma as u32 + 1);
    if cap.is_some_and(|cap| cap < k as u128) {
        return param(format!("q^(Gamma+1) = {q}^{} is below k = {k}", gamma + 1));
    }
    let digits: Vec<Vec<usize>> = (0..k)
        .map(|x| {
            let mut rest = x;
            (0..=gamma)
                .map(|_| {
                    let d = rest % q;
                    rest /= q;
                    d
                })
                .collect()
        })
        .collect();
    let assignment: Vec<Vec<usize>> = (0..a)
        .map(|j| {
            digits
                .iter()
                .map(|d| {
                    if j == q {
                        d[gamma]
                    } else {
                        // Horner evaluation of the digit polynomial at j
                        d.iter().rev().fold(0, |acc, &di| (acc * j + di) % q)
                    }
                })
                .collect()
        })
        .collect();
    let std = StDesign { k, q, a, gamma, assignment };
    if let Some(c) = capacity {
        let largest = std.pool_sizes().into_iter().max().unwrap_or(0);
        if largest > c {
            return Err(Error::Parameter(format!(
                "largest pool holds {largest} compounds but the capacity is {c}; choose a larger q"
            )));
        }
    }
    Ok(std)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_example() {
        let s = std_design(9, 3, 3, 1, None).unwrap();
        assert_eq!((s.assignment[0][5], s.assignment[1][5], s.assignment[2][5]), (2, 0, 1));
    }

    #[test]
    fn single_compound() {
        let s = std_design(1, 5, 4, 1, None).unwrap();
        assert!(s.assignment.iter().all(|l| l[0] == 0));
    }

    #[test]
    fn pairwise_co_occurrence_exhaustive() {
        for (k, q, a, gamma) in [(9, 3, 3, 1), (9, 3, 4, 1), (31, 5, 5, 2), (31, 7, 4, 1), (25, 5, 6, 1)] {
            let s = std_design(k, q, a, gamma, None).unwrap();
            for x in 0..k {
                for y in x + 1..k {
                    assert!(s.co_occurrences(x, y) <= gamma, "k={k} q={q} a={a}: {x},{y}");
                }
            }
        }
    }

    #[test]
    fn each_compound_once_per_layer() {
        let d = std_design(20, 5, 4, 1, None).unwrap().to_design();
        assert_eq!(d.n(), 20);
        for j in 0..20 {
            assert_eq!((0..20).filter(|&i| d.get(i, j) == 1).count(), 4);
        }
    }

    #[test]
    fn polynomial_layers_are_balanced() {
        let s = std_design(31, 7, 7, 1, None).unwrap();
        assert!(s.pool_sizes().into_iter().all(|p| p <= 31usize.div_ceil(7)));
    }

    #[test]
    fn parameter_errors() {
        assert!(std_design(9, 4, 3, 1, None).is_err());
        assert!(std_design(10, 3, 3, 1, None).is_err());
        assert!(std_design(9, 3, 5, 1, None).is_err());
        assert!(std_design(31, 5, 6, 2, Some(10)).is_err());
        assert!(std_design(31, 5, 5, 2, Some(7)).is_ok());
    }
}
