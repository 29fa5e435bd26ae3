//! Cyclic coordinate descent for `(1/2n) ||y - X b||^2 + lambda ||b||_1` over a
//! decreasing grid of `lambda`, warm-started from the previous solution.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_SWEEPS: usize = 10_000;
/// Coordinate descent keeps sweeping until the KKT residual is below this.
pub const KKT_TARGET: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LassoPath {
    /// Descending.
    pub lambdas: Vec<f64>,
    /// One coefficient vector per lambda, in the column order of the input.
    pub coefs: Vec<Vec<f64>>,
    pub sweeps: Vec<usize>,
    pub kkt_residuals: Vec<f64>,
    pub converged: Vec<bool>,
}

impl LassoPath {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for CdOptions {
    fn default() -> Self {
        CdOptions { tol: DEFAULT_TOL, max_sweeps: DEFAULT_MAX_SWEEPS }
    }
}

#[inline]
fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// `max_j |x_j' y| / n`, the smallest lambda at which the solution is zero.
pub fn lambda_max(cols: &[Vec<f64>], y: &[f64]) -> f64 {
    let n = y.len() as f64;
    cols.iter().map(|c| dot(c, y).abs()).fold(0.0, f64::max) / n
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest violation of the Lasso optimality conditions, with the gradient
/// `g_j = x_j'(X b - y) / n`: `|g_j| <= lambda` where `b_j = 0`, and
/// `g_j = -lambda sign(b_j)` elsewhere.
pub fn kkt_residual(cols: &[Vec<f64>], y: &[f64], beta: &[f64], lambda: f64) -> f64 {
    let n = y.len();
    let mut fitted = vec![0.0; n];
    for (col, &b) in cols.iter().zip(beta) {
        if b != 0.0 {
            for (f, x) in fitted.iter_mut().zip(col) {
                *f += b * x;
            }
        }
    }
    let resid: Vec<f64> = fitted.iter().zip(y).map(|(f, y)| f - y).collect();
    cols.iter()
        .zip(beta)
        .map(|(col, &b)| {
            let g = dot(col, &resid) / n as f64;
            if b == 0.0 {
                (g.abs() - lambda).max(0.0)
            } else {
                (g + lambda * b.signum()).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Fits the path for explicit `lambdas`, which are visited in the given order
/// (callers pass them descending so warm starts help).
pub fn fit_path(cols: &[Vec<f64>], y: &[f64], lambdas: &[f64], opts: CdOptions) -> LassoPath {
    let p = cols.len();
    let n = y.len() as f64;
    // Gram matrix and correlations, both scaled by 1/n
    let gram: Vec<Vec<f64>> = cols.iter().map(|a| cols.iter().map(|b| dot(a, b) / n).collect()).collect();
    let corr: Vec<f64> = cols.iter().map(|c| dot(c, y) / n).collect();

    let mut beta = vec![0.0; p];
    let mut g_beta = vec![0.0; p];
    let mut path = LassoPath {
        lambdas: lambdas.to_vec(),
        coefs: Vec::with_capacity(lambdas.len()),
        sweeps: Vec::with_capacity(lambdas.len()),
        kkt_residuals: Vec::with_capacity(lambdas.len()),
        converged: Vec::with_capacity(lambdas.len()),
    };

    for &lambda in lambdas {
        let mut sweeps = 0;
        let mut converged = false;
        let mut kkt = f64::INFINITY;
        while sweeps < opts.max_sweeps {
            sweeps += 1;
            let mut max_change: f64 = 0.0;
            for j in 0..p {
                let gjj = gram[j][j];
                if gjj <= 0.0 {
                    continue;
                }
                let old = beta[j];
                let z = corr[j] - g_beta[j] + gjj * old;
                let new = soft_threshold(z, lambda) / gjj;
                if new != old {
                    let d = new - old;
                    for (gb, row) in g_beta.iter_mut().zip(&gram) {
                        *gb += d * row[j];
                    }
                    beta[j] = new;
                    max_change = max_change.max(d.abs());
                }
            }
            if max_change < opts.tol || sweeps % POLISH_EVERY == 0 {
                kkt = kkt_from_gram(&g_beta, &corr, &beta, lambda);
                if kkt > KKT_TARGET {
                    if let Some(k) = polish(&gram, &corr, &mut beta, &mut g_beta, lambda) {
                        kkt = k;
                    }
                }
                if kkt <= KKT_TARGET {
                    converged = true;
                    break;
                }
            }
        }
        if !converged {
            kkt = kkt_from_gram(&g_beta, &corr, &beta, lambda);
        }
        path.coefs.push(beta.clone());
        path.sweeps.push(sweeps);
        path.kkt_residuals.push(kkt);
        path.converged.push(converged);
    }
    path
}

/// Sweeps between attempts to solve the KKT system on the current support.
const POLISH_EVERY: usize = 25;

/// Active-set refinement inside the current sign orthant.
///
/// With signs fixed the objective is a convex quadratic on the support. Each
/// step moves toward its minimizer (or, when the support Gram block is
/// singular, along a non-ascending null direction) and stops at the first
/// coefficient that reaches zero, which then leaves the support. The result
/// is kept only if the objective decreased; returns the new KKT residual.
fn polish(gram: &[Vec<f64>], corr: &[f64], beta: &mut [f64], g_beta: &mut [f64], lambda: f64) -> Option<f64> {
    let p = beta.len();
    let mut cand = beta.to_vec();
    for _ in 0..=p {
        let support: Vec<usize> = (0..p).filter(|&j| cand[j] != 0.0).collect();
        let m = support.len();
        if m == 0 {
            break;
        }
        let g = DMatrix::from_fn(m, m, |a, b| gram[support[a]][support[b]]);
        let rhs = DVector::from_fn(m, |a, _| corr[support[a]] - lambda * cand[support[a]].signum());
        let cur = DVector::from_fn(m, |a, _| cand[support[a]]);
        let (dir, full_step) = match restricted_step(g, &rhs) {
            Some(b) => (b - &cur, 1.0),
            None => {
                let v = null_direction(DMatrix::from_fn(m, m, |a, b| gram[support[a]][support[b]]));
                // the objective changes by -t * rhs'v along v
                let v = if rhs.dot(&v) < 0.0 { -v } else { v };
                (v, f64::INFINITY)
            }
        };
        let mut t = full_step;
        let mut hit = None;
        for a in 0..m {
            if cur[a] * dir[a] < 0.0 {
                let ta = -cur[a] / dir[a];
                if ta < t {
                    t = ta;
                    hit = Some(a);
                }
            }
        }
        if !t.is_finite() {
            break;
        }
        for a in 0..m {
            cand[support[a]] = cur[a] + t * dir[a];
        }
        match hit {
            Some(a) => cand[support[a]] = 0.0,
            None => break,
        }
    }
    let g_cand: Vec<f64> = gram.iter().map(|row| row.iter().zip(&cand).map(|(g, b)| g * b).sum()).collect();
    if objective(&g_cand, corr, &cand, lambda) < objective(g_beta, corr, beta, lambda) {
        beta.copy_from_slice(&cand);
        g_beta.copy_from_slice(&g_cand);
        Some(kkt_from_gram(g_beta, corr, beta, lambda))
    } else {
        None
    }
}

/// Minimizer of the sign-restricted quadratic when the support Gram block is
/// numerically positive definite.
fn restricted_step(g: DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let chol = g.cholesky()?;
    let diag = chol.l_dirty().diagonal();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d * d), hi.max(d * d)));
    if lo <= hi * 1e-10 {
        return None;
    }
    Some(chol.solve(rhs))
}

/// Eigenvector of the smallest eigenvalue.
fn null_direction(g: DMatrix<f64>) -> DVector<f64> {
    let eig = SymmetricEigen::new(g);
    let idx = eig.eigenvalues.imin();
    eig.eigenvectors.column(idx).into_owned()
}

/// Lasso objective up to the constant `||y||^2 / 2n`.
fn objective(g_beta: &[f64], corr: &[f64], beta: &[f64], lambda: f64) -> f64 {
    beta.iter()
        .zip(g_beta)
        .zip(corr)
        .map(|((b, gb), c)| 0.5 * b * gb - c * b + lambda * b.abs())
        .sum()
}

fn kkt_from_gram(g_beta: &[f64], corr: &[f64], beta: &[f64], lambda: f64) -> f64 {
    g_beta
        .iter()
        .zip(corr)
        .zip(beta)
        .map(|((gb, c), &b)| {
            let g = gb - c;
            if b == 0.0 {
                (g.abs() - lambda).max(0.0)
            } else {
                (g + lambda * b.signum()).abs()
            }
        })
        .fold(0.0, f64::max)
}
