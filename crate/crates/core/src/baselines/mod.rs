//! Comparison methods: one-compound-one-well screening and poolHiTS pooling
//! with shifted transversal designs.

mod ocow;
mod poolhits;
mod std_design;

pub use ocow::{ocow_analyze, ocow_lenth_analyze, LenthCall, OCOW_LEVEL};
pub use poolhits::{binarize_wells, poolhits_decode, CompoundStatus, Decoded, DEFAULT_BINARIZE_LEVEL};
pub use std_design::{is_prime, std_design, StDesign};
