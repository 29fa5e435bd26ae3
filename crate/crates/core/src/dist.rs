//! Normal and Student-t distribution functions used for thresholds.
//!
//! The normal quantile is Wichura's AS 241 rational approximation (about 16
//! significant digits). The t quantile is restricted to integer degrees of
//! freedom, where the CDF has a finite closed form; Newton's method on that
//! closed form converges to machine precision.

#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{param, Result};

pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn poly(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_608,
    133.141_667_891_784_377_45,
    1_971.590_950_306_551_442_7,
    13_731.693_765_509_461_125,
    45_921.953_931_549_871_457,
    67_265.770_927_008_700_853,
    33_430.575_583_588_128_105,
    2_509.080_928_730_122_672_7,
];
const B: [f64; 8] = [
    1.0,
    42.313_330_701_600_911_252,
    687.187_007_492_057_908_3,
    5_394.196_021_424_751_107_7,
    21_213.794_301_586_595_867,
    39_307.895_800_092_710_61,
    28_729.085_735_721_942_674,
    5_226.495_278_852_854_561,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_9,
    5.769_497_221_460_691_405_5,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    0.241_780_725_177_450_611_77,
    0.022_723_844_989_269_184_583_3,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_4,
    0.689_767_334_985_100_004_55,
    0.148_103_976_427_480_074_59,
    0.015_198_666_563_616_457_196_6,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2,
    5.463_784_911_164_114_369_9,
    1.784_826_539_917_291_335_8,
    0.296_560_571_828_504_891_23,
    0.026_532_189_526_576_123_093,
    0.001_242_660_947_388_078_438_6,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    0.599_832_206_555_887_937_69,
    0.136_929_880_922_735_805_31,
    0.014_875_361_290_850_614_852_5,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

/// Inverse of the standard normal CDF for `p` in `(0, 1)`.
pub fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        r -= 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

/// Student-t CDF for a positive integer number of degrees of freedom.
pub fn t_cdf(t: f64, df: u32) -> f64 {
    assert!(df >= 1, "t distribution needs df >= 1");
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    let nu = f64::from(df);
    let theta = (t.abs() / nu.sqrt()).atan();
    let (s, co) = theta.sin_cos();
    let cc = co * co;
    // A = P(|T| <= |t|)
    let a = if df % 2 == 1 {
        let mut term = co;
        let mut sum = 0.0;
        if df > 1 {
            sum = term;
            for m in 1..(df - 1) / 2 {
                let m = f64::from(m);
                term *= cc * (2.0 * m) / (2.0 * m + 1.0);
                sum += term;
            }
        }
        2.0 / PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..df / 2 {
            let m = f64::from(m);
            term *= cc * (2.0 * m - 1.0) / (2.0 * m);
            sum += term;
        }
        s * sum
    };
    if t >= 0.0 {
        0.5 + 0.5 * a
    } else {
        0.5 - 0.5 * a
    }
}

pub fn t_pdf(t: f64, df: u32) -> f64 {
    let nu = f64::from(df);
    let log_norm = libm::lgamma((nu + 1.0) / 2.0) - libm::lgamma(nu / 2.0) - 0.5 * (nu * PI).ln();
    (log_norm - (nu + 1.0) / 2.0 * (1.0 + t * t / nu).ln()).exp()
}

/// Quantile of the Student-t distribution with `df` degrees of freedom.
pub fn t_quantile(p: f64, df: u32) -> Result<f64> {
    if df == 0 {
        return param("t quantile needs at least one degree of freedom");
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return param(format!("probability {p} outside [0, 1]"));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    if p < 0.5 {
        return t_quantile(1.0 - p, df).map(|t| -t);
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    match df {
        1 => return Ok((PI * (p - 0.5)).tan()),
        2 => {
            let a = 4.0 * p * (1.0 - p);
            return Ok((2.0 * p - 1.0) * (2.0 / a).sqrt());
        }
        _ => {}
    }
    // Cornish-Fisher start; the CDF is concave for t > 0, so Newton from below
    // increases monotonically towards the root.
    let nu = f64::from(df);
    let z = norm_quantile(p);
    let z3 = z * z * z;
    let mut t = z + (z3 + z) / (4.0 * nu) + (5.0 * z3 * z * z + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);
    t = t.min(z * 10.0).max(z);
    for _ in 0..200 {
        let step = (t_cdf(t, df) - p) / t_pdf(t, df);
        t -= step;
        if step.abs() <= 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    Ok(t)
}
