use serde::Serialize;

use crate::design::Design;
use crate::dist::norm_quantile;
use crate::error::{param, Error, Result};
use crate::Direction;

pub const DEFAULT_BINARIZE_LEVEL: f64 = 0.96;

/// Labels well `i` positive when `y_i` lies beyond `center ± z_level scale`
/// in the effect direction. For the pilot variant pass the pilot mean and
/// standard deviation.
pub fn binarize_wells(y: &[f64], center: f64, scale: f64, direction: Direction, level: f64) -> Result<Vec<bool>> {
    if !(scale > 0.0 && scale.is_finite()) {
        return param(format!("scale must be positive, got {scale}"));
    }
    if !(level > 0.0 && level < 1.0) {
        return param(format!("binarization level {level} outside (0, 1)"));
    }
    let cut = norm_quantile(level) * scale;
    let sign = direction.sign();
    Ok(y.iter().map(|&v| sign * (v - center) > cut).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompoundStatus {
    Inert,
    Active,
    /// Neither eliminated nor confirmed; counted as a hit.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decoded {
    /// Zero-based compounds declared active, including inconclusive ones.
    pub hits: Vec<usize>,
    pub status: Vec<CompoundStatus>,
}

/// E-error decoding on an incidence matrix (`+1` = compound in well).
///
/// A compound in at least `E + 1` negative wells is inert; otherwise it is
/// active when it sits in at least `E + 1` positive wells, and inconclusive
/// when it does not.
pub fn poolhits_decode(incidence: &Design, labels: &[bool], e: usize) -> Result<Decoded> {
    if labels.len() != incidence.n() {
        return Err(Error::Dimension(format!("{} labels for {} wells", labels.len(), incidence.n())));
    }
    let k = incidence.k();
    let mut status = Vec::with_capacity(k);
    for j in 0..k {
        let (mut pos, mut neg) = (0usize, 0usize);
        for (i, &label) in labels.iter().enumerate() {
            if incidence.get(i, j) == 1 {
                if label {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
        }
        if pos + neg == 0 {
            return Err(Error::InvalidDesign(format!("compound {} appears in no well", j + 1)));
        }
        status.push(if neg > e {
            CompoundStatus::Inert
        } else if pos > e {
            CompoundStatus::Active
        } else {
            CompoundStatus::Inconclusive
        });
    }
    let hits = status.iter().enumerate().filter(|(_, &s)| s != CompoundStatus::Inert).map(|(j, _)| j).collect();
    Ok(Decoded { hits, status })
}
