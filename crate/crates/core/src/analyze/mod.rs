//! Hit calling for a pooled screen.
//!
//! 1. Center and scale the design columns to squared length `n`, center `y`.
//! 2. Fit the Lasso path on a 100-point log grid.
//! 3. Map each solution back to the `±1` coding and zero every estimate below
//!    `sigma / 8` in the effect direction (estimates in the wrong direction
//!    go too).
//! 4. Refit each surviving support by least squares and keep the support with
//!    the smallest BIC. Its factors are the hits.

mod lasso;
mod lenth;
mod refit;

pub use lasso::{fit_path, kkt_residual, lambda_max, CdOptions, LassoPath, DEFAULT_MAX_SWEEPS, DEFAULT_TOL, KKT_TARGET};
pub use lenth::{lenth_pse, LenthEstimate};
pub use refit::{bic, ols_with_intercept, OlsFit};

use std::collections::HashMap;

use serde::Serialize;

use crate::design::Design;
use crate::error::{param, Error, Result};
use crate::Direction;

/// Centered and scaled design plus what is needed to undo the scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub n: usize,
    /// Scaled columns for the estimable factors, in the order of `kept`.
    pub cols: Vec<Vec<f64>>,
    /// Zero-based design columns that were kept.
    pub kept: Vec<usize>,
    /// Constant columns, excluded from the fit.
    pub dropped: Vec<usize>,
    pub means: Vec<f64>,
    /// `x_cs = (x - mean) / scale`.
    pub scales: Vec<f64>,
    pub y_mean: f64,
    pub y_c: Vec<f64>,
}

impl Standardized {
    /// Coefficients on the original `±1` coding, one per design column.
    pub fn to_original(&self, beta_cs: &[f64], k: usize) -> Vec<f64> {
        let mut out = vec![0.0; k];
        for ((&j, &b), &s) in self.kept.iter().zip(beta_cs).zip(&self.scales) {
            out[j] = b / s;
        }
        out
    }
}

pub fn center_scale(design: &Design, y: &[f64]) -> Result<Standardized> {
    let (n, k) = (design.n(), design.k());
    if y.len() != n {
        return Err(Error::Dimension(format!("{} responses for {n} wells", y.len())));
    }
    let n_f = n as f64;
    let mut cols = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut means = Vec::new();
    let mut scales = Vec::new();
    for j in 0..k {
        let raw: Vec<f64> = (0..n).map(|i| f64::from(design.get(i, j))).collect();
        let mean = raw.iter().sum::<f64>() / n_f;
        let ss: f64 = raw.iter().map(|x| (x - mean).powi(2)).sum();
        if ss <= 0.0 {
            dropped.push(j);
            continue;
        }
        let scale = (ss / n_f).sqrt();
        cols.push(raw.iter().map(|x| (x - mean) / scale).collect());
        kept.push(j);
        means.push(mean);
        scales.push(scale);
    }
    if kept.is_empty() {
        return Err(Error::NoEstimableFactors);
    }
    let y_mean = y.iter().sum::<f64>() / n_f;
    let y_c = y.iter().map(|v| v - y_mean).collect();
    Ok(Standardized { n, cols, kept, dropped, means, scales, y_mean, y_c })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GridSpec {
    /// `points` values of `lambda` equally spaced in `ln(n lambda)` from
    /// `ln(max |X_cs' y_c|)` down to `log_floor`.
    Log { points: usize, log_floor: f64 },
    Explicit(Vec<f64>),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Log { points: 100, log_floor: -8.0 }
    }
}

impl GridSpec {
    /// Descending grid for a standardized problem. The first point is exactly
    /// `lambda_max`, so the path starts at the all-zero solution.
    pub fn lambdas(&self, std: &Standardized) -> Result<Vec<f64>> {
        match self {
            GridSpec::Explicit(v) => {
                if v.is_empty() || v.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
                    return param("explicit lambda grid must be nonempty and nonnegative");
                }
                let mut v = v.clone();
                v.sort_by(|a, b| b.total_cmp(a));
                Ok(v)
            }
            &GridSpec::Log { points, log_floor } => {
                if points == 0 {
                    return param("lambda grid needs at least one point");
                }
                let n = std.n as f64;
                let top = lambda_max(&std.cols, &std.y_c) * n;
                let floor = log_floor.exp();
                if top <= floor || points == 1 {
                    return Ok(vec![top.max(floor) / n]);
                }
                let (hi, lo) = (top.ln(), log_floor);
                let step = (hi - lo) / (points - 1) as f64;
                let mut grid: Vec<f64> = (0..points).map(|i| (hi - step * i as f64).exp() / n).collect();
                grid[0] = top / n;
                Ok(grid)
            }
        }
    }
}

pub fn lasso_path(std: &Standardized, grid: &GridSpec, opts: CdOptions) -> Result<LassoPath> {
    let lambdas = grid.lambdas(std)?;
    Ok(fit_path(&std.cols, &std.y_c, &lambdas, opts))
}

/// Which coefficient scale the `sigma / 8` threshold is applied on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdScale {
    /// The `±1` coding, where one unit is half the pool-mean difference.
    #[default]
    Original,
    /// The centered and scaled coding the Lasso was fit on.
    Standardized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BicEntry {
    pub lambda: f64,
    /// Zero-based factors in the refit model.
    pub support: Vec<usize>,
    pub bic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisResult {
    pub lambda: f64,
    /// Zero-based indices of the declared hits, ascending.
    pub hits: Vec<usize>,
    /// Refit coefficients of the hits on the `±1` coding, aligned with `hits`.
    pub estimates: Vec<f64>,
    pub intercept: f64,
    pub bic_trace: Vec<BicEntry>,
    pub direction: Direction,
    pub path_converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
struct Refit {
    support: Vec<usize>,
    coefs: Vec<f64>,
    intercept: f64,
    bic: f64,
}

fn refit_support(design: &Design, y: &[f64], mut support: Vec<usize>, cutoff: f64, sign: f64) -> Refit {
    let n = design.n();
    let columns: HashMap<usize, Vec<f64>> = support
        .iter()
        .map(|&j| (j, (0..n).map(|i| f64::from(design.get(i, j))).collect()))
        .collect();
    loop {
        let cols: Vec<&[f64]> = support.iter().map(|j| columns[j].as_slice()).collect();
        let fit = ols_with_intercept(&cols, y);
        // a refit estimate that falls below the cutoff is dropped like a
        // Lasso estimate would be
        let keep: Vec<usize> = support
            .iter()
            .zip(&fit.coefs)
            .filter(|(_, &b)| sign * b >= cutoff)
            .map(|(&j, _)| j)
            .collect();
        if keep.len() == support.len() {
            let bic = bic(n, fit.rss, support.len() + 1);
            return Refit { support, coefs: fit.coefs, intercept: fit.intercept, bic };
        }
        support = keep;
    }
}

/// Thresholds every solution on the path, refits the survivors and picks the
/// smallest BIC, ties going to the larger `lambda`.
pub fn threshold_and_refit(
    path: &LassoPath,
    std: &Standardized,
    design: &Design,
    y: &[f64],
    sigma: f64,
    direction: Direction,
    scale: ThresholdScale,
) -> Result<AnalysisResult> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return param(format!("sigma must be positive, got {sigma}"));
    }
    if y.len() != design.n() {
        return Err(Error::Dimension(format!("{} responses for {} wells", y.len(), design.n())));
    }
    let (n, k) = (design.n(), design.k());
    let sign = direction.sign();
    let cutoff = sigma / 8.0;
    let cap = n.saturating_sub(2);
    let mut cache: HashMap<Vec<usize>, Refit> = HashMap::new();
    let mut trace = Vec::with_capacity(path.lambdas.len());
    let mut best: Option<(f64, f64, Refit)> = None;

    for (beta_cs, &lambda) in path.coefs.iter().zip(&path.lambdas) {
        let original = std.to_original(beta_cs, k);
        let judged: Vec<f64> = match scale {
            ThresholdScale::Original => original.clone(),
            ThresholdScale::Standardized => {
                let mut v = vec![0.0; k];
                for (&j, &b) in std.kept.iter().zip(beta_cs) {
                    v[j] = b;
                }
                v
            }
        };
        let mut support: Vec<usize> = (0..k).filter(|&j| sign * judged[j] >= cutoff).collect();
        if support.len() > cap {
            support.sort_by(|&a, &b| original[b].abs().total_cmp(&original[a].abs()).then(a.cmp(&b)));
            support.truncate(cap);
            support.sort_unstable();
        }
        let refit = cache
            .entry(support.clone())
            .or_insert_with(|| refit_support(design, y, support, cutoff, sign))
            .clone();
        trace.push(BicEntry { lambda, support: refit.support.clone(), bic: refit.bic });
        if best.as_ref().is_none_or(|(b, _, _)| refit.bic < *b) {
            best = Some((refit.bic, lambda, refit));
        }
    }
    let (_, lambda, winner) = best.ok_or_else(|| Error::Parameter("empty lambda path".into()))?;
    Ok(AnalysisResult {
        lambda,
        hits: winner.support,
        estimates: winner.coefs,
        intercept: winner.intercept,
        bic_trace: trace,
        direction,
        path_converged: path.all_converged(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeOptions {
    pub sigma: f64,
    pub direction: Direction,
    pub grid: GridSpec,
    pub threshold_scale: ThresholdScale,
}

impl AnalyzeOptions {
    pub fn new(sigma: f64, direction: Direction) -> Self {
        AnalyzeOptions { sigma, direction, grid: GridSpec::default(), threshold_scale: ThresholdScale::default() }
    }
}

/// Full pipeline; also returns the path for profile export.
///
/// A [`GridSpec::Log`] floor is read in units of `sigma`, so rescaling the
/// response together with `sigma` visits the same points of the path.
pub fn analyze_with_path(design: &Design, y: &[f64], opts: &AnalyzeOptions) -> Result<(AnalysisResult, LassoPath, Standardized)> {
    let std = center_scale(design, y)?;
    let grid = match opts.grid {
        GridSpec::Log { points, log_floor } if opts.sigma > 0.0 && opts.sigma.is_finite() => {
            GridSpec::Log { points, log_floor: log_floor + opts.sigma.ln() }
        }
        ref other => other.clone(),
    };
    let path = lasso_path(&std, &grid, CdOptions::default())?;
    let result = threshold_and_refit(&path, &std, design, y, opts.sigma, opts.direction, opts.threshold_scale)?;
    Ok((result, path, std))
}

pub fn analyze(design: &Design, y: &[f64], opts: &AnalyzeOptions) -> Result<AnalysisResult> {
    analyze_with_path(design, y, opts).map(|(r, _, _)| r)
}
