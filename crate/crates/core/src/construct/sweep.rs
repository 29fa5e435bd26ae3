use serde::Serialize;

use super::{construct, ConstructConfig};
use crate::bounds::theorem1_bound;
use crate::design::row_slack;
use crate::error::{param, Result};
use crate::seed;

/// One row of a constraint sweep. The bound columns are filled only when the
/// constructed design has no row slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: usize,
    pub q: i64,
    pub ue_s2: f64,
    pub ue_s2_doubled: f64,
    pub slack_min: i64,
    pub slack_mean: f64,
    pub slack_max: i64,
    pub q_lb: Option<i64>,
    pub ue_lb: Option<f64>,
    pub converged: bool,
}

/// Constructs a design for every `c` in `c_list` with the starts, pass cap and
/// init rule of `base`. Each `c` gets its own seed derived from `base.seed`.
pub fn constraint_sweep(n: usize, k: usize, c_list: &[usize], base: &ConstructConfig) -> Result<Vec<SweepRow>> {
    if c_list.is_empty() {
        return param("constraint sweep needs at least one value of c");
    }
    if let Some(&c) = c_list.iter().find(|&&c| c == 0 || c > k) {
        return param(format!("row constraint c={c} outside 1..={k}"));
    }
    c_list
        .iter()
        .map(|&c| {
            let cfg = ConstructConfig { n, k, c, seed: seed::derive(base.seed, &[c as u64]), ..base.clone() };
            let built = construct(&cfg)?;
            let slack = row_slack(built.best.design())?;
            let ue = built.best.ue_s2();
            let (q_lb, ue_lb) = if slack.is_tight() {
                let b = theorem1_bound(n, k, c)?;
                (Some(b.q_lb), Some(b.ue_lb))
            } else {
                (None, None)
            };
            Ok(SweepRow {
                c,
                q: built.best.q(),
                ue_s2: ue.value(),
                ue_s2_doubled: ue.doubled(),
                slack_min: slack.min,
                slack_mean: slack.mean,
                slack_max: slack.max,
                q_lb,
                ue_lb,
                converged: built.converged,
            })
        })
        .collect()
}
