use serde::Serialize;

use crate::analyze::lenth_pse;
use crate::dist::{norm_quantile, t_quantile};
use crate::error::{param, Result};
use crate::Direction;

/// Upper-tail probability of the one-compound-one-well z test.
pub const OCOW_LEVEL: f64 = 0.95;

/// Declares compound `i` a hit when `y_i` lies beyond `mu ± z_0.95 sigma` in
/// the effect direction.
pub fn ocow_analyze(y: &[f64], mu: f64, sigma: f64, direction: Direction) -> Result<Vec<usize>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return param(format!("sigma must be positive, got {sigma}"));
    }
    let cut = norm_quantile(OCOW_LEVEL) * sigma;
    let sign = direction.sign();
    Ok(y.iter().enumerate().filter(|(_, &v)| sign * (v - mu) > cut).map(|(i, _)| i).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LenthCall {
    pub hits: Vec<usize>,
    pub pse: f64,
    pub df: u32,
    pub t_critical: f64,
    pub degenerate: bool,
}

/// Unknown-variance variant: centers on `mu_hat`, estimates the scale with
/// Lenth's PSE and uses `t_{0.95, floor(k/3)} * PSE` as the cut.
pub fn ocow_lenth_analyze(y: &[f64], mu_hat: f64, direction: Direction) -> Result<LenthCall> {
    let k = y.len();
    if k < 6 {
        return param(format!("Lenth's threshold needs at least 6 compounds, got {k}"));
    }
    let centered: Vec<f64> = y.iter().map(|v| v - mu_hat).collect();
    let est = lenth_pse(&centered)?;
    let df = (k / 3) as u32;
    let t_critical = t_quantile(OCOW_LEVEL, df)?;
    if est.degenerate {
        return Ok(LenthCall { hits: Vec::new(), pse: 0.0, df, t_critical, degenerate: true });
    }
    let cut = t_critical * est.pse;
    let sign = direction.sign();
    let hits = centered.iter().enumerate().filter(|(_, &c)| sign * c > cut).map(|(i, _)| i).collect();
    Ok(LenthCall { hits, pse: est.pse, df, t_critical, degenerate: false })
}
