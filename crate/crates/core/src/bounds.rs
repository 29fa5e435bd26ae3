//! Lower bounds on `Q` and UE(s²) for designs whose rows all hold exactly `c`
//! compounds, plus the algebraic identities the bounds rest on.
//!
//! `Q` splits as
//!
//! ```text
//! Q = n^2 (1 - k^2) + 2 ||X'1||^2 + 2n ||X1||^2 + sum_{l,j} ||X_l - X_j||_1^2
//! ```
//!
//! With tight rows `||X1||^2 = n (2c - k)^2` is fixed, and the remaining two
//! terms are convex in integer quantities with a fixed total, so spreading
//! those totals as evenly as integrality allows gives the floor.

use serde::Serialize;

use crate::criterion::build_state;
use crate::design::{row_slack, Design};
use crate::error::{param, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    /// `floor(nc / k)`: the even share of `+1` entries per column.
    pub gamma: i64,
    /// `nc - k gamma`: how many columns take one extra `+1`.
    pub delta: i64,
    /// `floor(2nc(k-c) / (k^2 - k))`, half the even share of column `l1` distance.
    pub phi: i64,
    pub psi: i64,
    pub colsum_lb: i64,
    pub rowdiff_lb: i64,
    pub rowsum_sq: i64,
    pub q_lb: i64,
    pub ue_lb: f64,
}

pub fn theorem1_bound(n: usize, k: usize, c: usize) -> Result<BoundReport> {
    if n == 0 || k == 0 {
        return param(format!("n and k must be positive, got n={n}, k={k}"));
    }
    if c == 0 || c > k {
        return param(format!("row constraint must satisfy 1 <= c <= k, got c={c}, k={k}"));
    }
    let (ni, ki, ci) = (n as i64, k as i64, c as i64);
    let nc = ni * ci;
    let gamma = nc / ki;
    let delta = nc - ki * gamma;
    let colsum_lb = (ki - delta) * (ni - 2 * gamma).pow(2) + delta * (ni - 2 * gamma - 2).pow(2);

    let pairs = ki * ki - ki;
    let (phi, psi) = if pairs == 0 {
        (0, 0)
    } else {
        let total = 2 * nc * (ki - ci);
        let phi = total / pairs;
        (phi, total - pairs * phi)
    };
    let rowdiff_lb = 4 * (pairs * phi * phi + psi * (2 * phi + 1));
    let rowsum_sq = ni * (2 * ci - ki).pow(2);
    let q_lb = ni * ni * (1 - ki * ki) + 2 * colsum_lb + 2 * ni * rowsum_sq + rowdiff_lb;
    let ue_lb = (q_lb - ni * ni * (ki + 1)) as f64 / (2 * ki * (ki + 1)) as f64;
    Ok(BoundReport { n, k, c, gamma, delta, phi, psi, colsum_lb, rowdiff_lb, rowsum_sq, q_lb, ue_lb })
}

/// Residuals of the three `±1`-matrix identities; all are zero for any design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityResiduals {
    /// `||X1||^2 + sum ||X_l - X_j||_1 - nk^2`
    pub rowsum_coldiff: i64,
    /// `||X'1||^2 + sum ||X_i. - X_m.||_1 - n^2 k`
    pub colsum_rowdiff: i64,
    /// `tr(X'XX'X) - (-n^2k^2 + 2n ||X1||^2 + sum ||X_l - X_j||_1^2)`
    pub trace: i64,
}

impl IdentityResiduals {
    pub fn all_zero(&self) -> bool {
        self.rowsum_coldiff == 0 && self.colsum_rowdiff == 0 && self.trace == 0
    }
}

pub fn identity_check(design: &Design) -> IdentityResiduals {
    let (n, k) = (design.n(), design.k());
    let x = |i: usize, j: usize| i64::from(design.get(i, j));
    let (ni, ki) = (n as i64, k as i64);

    let rowsum_sq: i64 = (0..n).map(|i| (0..k).map(|j| x(i, j)).sum::<i64>().pow(2)).sum();
    let colsum_sq: i64 = (0..k).map(|j| (0..n).map(|i| x(i, j)).sum::<i64>().pow(2)).sum();

    let mut coldiff = 0i64;
    let mut coldiff_sq = 0i64;
    for l in 0..k {
        for j in 0..k {
            let d: i64 = (0..n).map(|i| (x(i, l) - x(i, j)).abs()).sum();
            coldiff += d;
            coldiff_sq += d * d;
        }
    }
    let mut rowdiff = 0i64;
    for i in 0..n {
        for m in 0..n {
            rowdiff += (0..k).map(|j| (x(i, j) - x(m, j)).abs()).sum::<i64>();
        }
    }
    let mut trace = 0i64;
    for l in 0..k {
        for j in 0..k {
            let g: i64 = (0..n).map(|i| x(i, l) * x(i, j)).sum();
            trace += g * g;
        }
    }
    IdentityResiduals {
        rowsum_coldiff: rowsum_sq + coldiff - ni * ki * ki,
        colsum_rowdiff: colsum_sq + rowdiff - ni * ni * ki,
        trace: trace - (-ni * ni * ki * ki + 2 * ni * rowsum_sq + coldiff_sq),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certificate {
    /// Every row is tight, so the bound applies.
    Tight { q: i64, q_lb: i64, gap_q: i64, gap_ratio: f64, attained: bool },
    /// Some row has slack; the bound says nothing about this design.
    NotApplicable { max_slack: i64 },
}

/// Compares a design against its bound. `gap_ratio` is `gap_q / Q`.
///
/// A tight design below the bound means one of the two computations is
/// wrong, and is reported as [`Error::BoundInconsistency`].
pub fn certify(design: &Design, report: &BoundReport) -> Result<Certificate> {
    if (design.n(), design.k(), design.c()) != (report.n, report.k, report.c) {
        return Err(Error::Dimension(format!(
            "design is (n={}, k={}, c={}) but the bound is for (n={}, k={}, c={})",
            design.n(),
            design.k(),
            design.c(),
            report.n,
            report.k,
            report.c
        )));
    }
    let slack = row_slack(design)?;
    if !slack.is_tight() {
        return Ok(Certificate::NotApplicable { max_slack: slack.max });
    }
    let q = build_state(design.clone())?.q();
    let gap_q = q - report.q_lb;
    if gap_q < 0 {
        return Err(Error::BoundInconsistency { q, q_lb: report.q_lb });
    }
    Ok(Certificate::Tight { q, q_lb: report.q_lb, gap_q, gap_ratio: gap_q as f64 / q as f64, attained: gap_q == 0 })
}
