use nalgebra::{DMatrix, DVector};

/// Ordinary least squares with an intercept. Rank-deficient supports are
/// handled through the pseudo-inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub intercept: f64,
    pub coefs: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
}

pub fn ols_with_intercept(cols: &[&[f64]], y: &[f64]) -> OlsFit {
    let n = y.len();
    let p = cols.len();
    let design = DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { cols[j - 1][i] });
    let rhs = DVector::from_column_slice(y);
    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let eps = max_sv * (n.max(p + 1) as f64) * f64::EPSILON;
    let beta = svd.solve(&rhs, eps).expect("both factors were computed");
    let residuals: Vec<f64> = (&rhs - &design * &beta).iter().copied().collect();
    let rss = residuals.iter().map(|r| r * r).sum();
    OlsFit { intercept: beta[0], coefs: beta.iter().skip(1).copied().collect(), residuals, rss }
}

/// `n ln(RSS / n) + p ln(n)`, with `p` counting the intercept.
pub fn bic(n: usize, rss: f64, params: usize) -> f64 {
    let n_f = n as f64;
    n_f * (rss.max(f64::MIN_POSITIVE) / n_f).ln() + params as f64 * n_f.ln()
}
