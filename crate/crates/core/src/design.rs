//! Two-level pooling designs and their row-constraint diagnostics.
//!
//! A [`Design`] is an `n x k` matrix over `{-1, +1}`: row `i` is a well, column
//! `j` a compound, and `+1` means "compound `j` is pipetted into well `i`". The
//! row constraint `c` caps the number of compounds per well, which in the
//! `±1` coding reads `sum_j x_ij <= 2c - k`.

use serde::Serialize;

use crate::error::{param, Error, Result, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Design {
    n: usize,
    k: usize,
    c: usize,
    entries: Vec<i8>,
}

impl Design {
    /// Builds a design from row-major entries.
    ///
    /// Only the shape and the range of `c` are checked here; entry values and
    /// the row constraint are checked by [`Design::validate`], so that a
    /// malformed matrix can still be inspected and reported on.
    pub fn new(n: usize, k: usize, c: usize, entries: Vec<i8>) -> Result<Self> {
        if n == 0 || k == 0 {
            return param(format!("design needs n >= 1 and k >= 1, got n={n}, k={k}"));
        }
        if c == 0 || c > k {
            return param(format!("row constraint must satisfy 1 <= c <= k, got c={c}, k={k}"));
        }
        if entries.len() != n * k {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {n}x{k} design, got {}",
                n * k,
                entries.len()
            )));
        }
        Ok(Design { n, k, c, entries })
    }

    /// Builds a design from rows and checks every invariant.
    pub fn from_rows(rows: &[Vec<i8>], c: usize) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("rows have unequal lengths".into()));
        }
        let design = Design::new(n, k, c, rows.concat())?;
        design.validate()?;
        Ok(design)
    }

    /// The all `-1` design: no compound in any well.
    pub fn empty(n: usize, k: usize, c: usize) -> Result<Self> {
        Design::new(n, k, c, vec![-1; n * k])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> usize {
        self.c
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.k + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: i8) {
        self.entries[i * self.k + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks_exact(self.k)
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// Number of `+1` entries (compounds) in row `i`.
    pub fn plus_count(&self, i: usize) -> usize {
        self.row(i).iter().filter(|&&x| x == 1).count()
    }

    /// Returns the same matrix under a different row constraint.
    pub fn with_constraint(&self, c: usize) -> Result<Self> {
        Design::new(self.n, self.k, c, self.entries.clone())
    }

    /// Reports the first entry outside `{-1, +1}`, then the first row that
    /// breaks the row constraint.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for (idx, &value) in self.entries.iter().enumerate() {
            if value != 1 && value != -1 {
                return Err(Violation::EntryDomain { row: idx / self.k, col: idx % self.k, value });
            }
        }
        for row in 0..self.n {
            let plus_count = self.plus_count(row);
            if plus_count > self.c {
                return Err(Violation::RowConstraint { row, plus_count, c: self.c });
            }
        }
        Ok(())
    }

    /// Collects every violation instead of stopping at the first.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (idx, &value) in self.entries.iter().enumerate() {
            if value != 1 && value != -1 {
                out.push(Violation::EntryDomain { row: idx / self.k, col: idx % self.k, value });
            }
        }
        for row in 0..self.n {
            let plus_count = self.plus_count(row);
            if plus_count > self.c {
                out.push(Violation::RowConstraint { row, plus_count, c: self.c });
            }
        }
        out
    }

    /// Zero-based indices of the compounds in well `i`.
    pub fn pool(&self, i: usize) -> Vec<usize> {
        self.row(i).iter().enumerate().filter(|(_, &x)| x == 1).map(|(j, _)| j).collect()
    }
}

/// Per-row slack `(2c - k) - sum_j x_ij`, which equals `2 (c - plus_count)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackProfile {
    pub slacks: Vec<i64>,
    pub min: i64,
    pub mean: f64,
    pub max: i64,
}

impl SlackProfile {
    pub fn is_tight(&self) -> bool {
        self.max == 0
    }
}

pub fn row_slack(design: &Design) -> Result<SlackProfile> {
    design.validate()?;
    let bound = 2 * design.c() as i64 - design.k() as i64;
    let slacks: Vec<i64> = design
        .rows()
        .map(|row| bound - row.iter().map(|&x| i64::from(x)).sum::<i64>())
        .collect();
    let min = *slacks.iter().min().expect("n >= 1");
    let max = *slacks.iter().max().expect("n >= 1");
    let mean = slacks.iter().sum::<i64>() as f64 / slacks.len() as f64;
    Ok(SlackProfile { slacks, min, mean, max })
}
