//! The bordered information matrix `S = L'L` with `L = [1, X]` and the
//! integer surrogate `Q = tr(S^2)`.
//!
//! Column 0 of `L` is the intercept, so factor `j` of the design (zero-based)
//! lives at index `j + 1` of `S`. Every entry of `S` is an integer because the
//! design entries are `±1`, and all bookkeeping stays in `i64`.

use serde::Serialize;

use crate::design::Design;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionState {
    design: Design,
    dim: usize,
    s: Vec<i64>,
    q: i64,
}

/// The UE(s²) value kept as an exact fraction `sum_{i<j} s_ij^2 / (k (k + 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UeValue {
    pub off_diagonal_sum: i64,
    pub denominator: i64,
}

impl UeValue {
    pub fn value(&self) -> f64 {
        self.off_diagonal_sum as f64 / self.denominator as f64
    }

    /// `(Q - n^2 (k+1)) / (k (k+1))`, twice the averaged value. Reported next to
    /// [`UeValue::value`] because both normalizations circulate.
    pub fn doubled(&self) -> f64 {
        2.0 * self.value()
    }
}

pub fn build_state(design: Design) -> Result<CriterionState> {
    if let Err(v) = design.validate() {
        if matches!(v, crate::error::Violation::EntryDomain { .. }) {
            return Err(Error::InvalidDesign(v.to_string()));
        }
    }
    let (n, k) = (design.n(), design.k());
    let dim = k + 1;
    let mut s = vec![0i64; dim * dim];
    let mut l_row = vec![0i64; dim];
    for i in 0..n {
        l_row[0] = 1;
        for j in 0..k {
            l_row[j + 1] = i64::from(design.get(i, j));
        }
        for a in 0..dim {
            let la = l_row[a];
            let row = &mut s[a * dim..(a + 1) * dim];
            for (b, v) in row.iter_mut().enumerate().skip(a) {
                *v += la * l_row[b];
            }
        }
    }
    for a in 0..dim {
        for b in 0..a {
            s[a * dim + b] = s[b * dim + a];
        }
    }
    let q = s.iter().map(|v| v * v).sum();
    Ok(CriterionState { design, dim, s, q })
}

impl CriterionState {
    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn into_design(self) -> Design {
        self.design
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Entry `s_ab` of the bordered matrix (index 0 is the intercept).
    #[inline]
    pub fn s(&self, a: usize, b: usize) -> i64 {
        self.s[a * self.dim + b]
    }

    pub fn s_matrix(&self) -> Vec<Vec<i64>> {
        self.s.chunks_exact(self.dim).map(<[i64]>::to_vec).collect()
    }

    pub(crate) fn s_row(&self, a: usize) -> &[i64] {
        &self.s[a * self.dim..(a + 1) * self.dim]
    }

    /// Entry of `L` at row `i`, column `a` (0 is the intercept).
    #[inline]
    pub fn l(&self, i: usize, a: usize) -> i64 {
        if a == 0 {
            1
        } else {
            i64::from(self.design.get(i, a - 1))
        }
    }

    /// `sum_{a<b} s_ab^2`, recovered from `Q`.
    pub fn off_diagonal_sum(&self) -> i64 {
        let n = self.design.n() as i64;
        let k = self.design.k() as i64;
        (self.q - n * n * (k + 1)) / 2
    }

    pub fn ue_s2(&self) -> UeValue {
        let k = self.design.k() as i64;
        UeValue { off_diagonal_sum: self.off_diagonal_sum(), denominator: k * (k + 1) }
    }

    /// Flips `x_{i, a-1}` and applies the rank-2 update to `S`: row and column
    /// `a` lose `2 x_ia L_{i[a]}`. Returns the change in `Q`.
    pub(crate) fn flip_in_place(&mut self, i: usize, a: usize) -> i64 {
        debug_assert!(a >= 1);
        let dim = self.dim;
        let x = self.l(i, a);
        let mut delta_q = 0i64;
        for b in 0..dim {
            if b == a {
                continue;
            }
            let old = self.s[a * dim + b];
            let new = old - 2 * x * self.l(i, b);
            // each off-diagonal pair appears twice in tr(S^2)
            delta_q += 2 * (new * new - old * old);
            self.s[a * dim + b] = new;
            self.s[b * dim + a] = new;
        }
        self.design.set(i, a - 1, -self.design.get(i, a - 1));
        self.q += delta_q;
        delta_q
    }

    /// Checks `S` and `Q` against a from-scratch rebuild.
    pub fn is_consistent(&self) -> bool {
        match build_state(self.design.clone()) {
            Ok(fresh) => fresh.s == self.s && fresh.q == self.q,
            Err(_) => false,
        }
    }
}
