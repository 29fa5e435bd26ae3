use serde::Serialize;

use crate::error::{param, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LenthEstimate {
    /// `1.5 * median |c_i|`
    pub s0: f64,
    /// `1.5 * median { |c_i| : |c_i| < 2.5 s0 }`
    pub pse: f64,
    /// Set when the values are all zero and no scale can be estimated.
    pub degenerate: bool,
}

pub(crate) fn median(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

/// Lenth's pseudo standard error of a set of centered values.
pub fn lenth_pse(values: &[f64]) -> Result<LenthEstimate> {
    if values.len() < 2 {
        return param(format!("Lenth's estimator needs at least 2 values, got {}", values.len()));
    }
    let mut abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let s0 = 1.5 * median(&abs);
    let cut = 2.5 * s0;
    let trimmed: Vec<f64> = abs.iter().copied().filter(|&a| a < cut).collect();
    if trimmed.is_empty() {
        return Ok(LenthEstimate { s0, pse: 0.0, degenerate: true });
    }
    let pse = 1.5 * median(&trimmed);
    Ok(LenthEstimate { s0, pse, degenerate: pse == 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_magnitudes() {
        let e = lenth_pse(&[2.0, -2.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.pse, 3.0);
    }

    #[test]
    fn outlier_is_trimmed() {
        let e = lenth_pse(&[1.0, 1.0, 1.0, 1.0, 100.0]).unwrap();
        assert_eq!(e.s0, 1.5);
        assert_eq!(e.pse, 1.5);
    }

    #[test]
    fn symmetrization_is_invariant() {
        let v = [0.3, -1.2, 0.8, 2.5, -0.1, 0.9];
        let mut both = v.to_vec();
        both.extend(v.iter().map(|x| -x));
        assert_eq!(lenth_pse(&v).unwrap().pse, lenth_pse(&both).unwrap().pse);
    }

    #[test]
    fn zeros_are_degenerate() {
        let e = lenth_pse(&[0.0; 5]).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.pse, 0.0);
        assert!(lenth_pse(&[1.0]).is_err());
    }
}
