//! Coordinate-exchange construction of row-constrained UE(s²) designs.
//!
//! A start draws a random feasible design and then sweeps the rows: first
//! single-entry flips, then `+1`/`-1` swaps inside the row, accepting a move
//! only when it strictly lowers `Q`. Sweeps repeat until a full pass makes no
//! exchange. [`construct`] runs many starts and keeps the best.

mod moves;
mod sweep;

pub use moves::{apply_move, delta_flip, delta_general, delta_swap, ExchangeDelta, InterceptPolicy, Move};
pub use sweep::{constraint_sweep, SweepRow};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::criterion::{build_state, CriterionState};
use crate::design::Design;
use crate::error::{param, Result};
use crate::seed;

pub const DEFAULT_STARTS: usize = 100;
pub const DEFAULT_MAX_PASSES: usize = 10_000;

/// How a start chooses the number of `+1` entries in each row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum InitRule {
    /// `m ~ Uniform{0, ..., c}` per row.
    #[default]
    UniformCount,
    /// Exactly `c` per row.
    Tight,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructConfig {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub starts: usize,
    pub seed: u64,
    pub max_passes: usize,
    pub init: InitRule,
}

impl ConstructConfig {
    pub fn new(n: usize, k: usize, c: usize) -> Self {
        ConstructConfig { n, k, c, starts: DEFAULT_STARTS, seed: 0, max_passes: DEFAULT_MAX_PASSES, init: InitRule::default() }
    }

    pub fn starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return param("at least one start is required");
        }
        if self.n == 0 || self.k == 0 {
            return param(format!("n and k must be positive, got n={}, k={}", self.n, self.k));
        }
        if self.c == 0 || self.c > self.k {
            return param(format!("row constraint must satisfy 1 <= c <= k, got c={}, k={}", self.c, self.k));
        }
        if self.max_passes == 0 {
            return param("max_passes must be positive");
        }
        Ok(())
    }

    /// Seed used by start `index`.
    pub fn start_seed(&self, index: usize) -> u64 {
        seed::derive(self.seed, &[index as u64])
    }
}

pub fn random_feasible_init(n: usize, k: usize, c: usize, seed: u64) -> Result<Design> {
    init_with_rule(n, k, c, seed, InitRule::UniformCount)
}

pub fn init_with_rule(n: usize, k: usize, c: usize, seed: u64, rule: InitRule) -> Result<Design> {
    if c == 0 || c > k {
        return param(format!("row constraint must satisfy 1 <= c <= k, got c={c}, k={k}"));
    }
    let mut design = Design::empty(n, k, c)?;
    let mut rng = seed::rng(seed);
    for i in 0..n {
        let m = match rule {
            InitRule::UniformCount => rng.random_range(0..=c),
            InitRule::Tight => c,
        };
        for j in sample(&mut rng, k, m) {
            design.set(i, j, 1);
        }
    }
    Ok(design)
}

#[derive(Debug, Clone)]
pub struct Optimized {
    pub state: CriterionState,
    pub passes: usize,
    pub converged: bool,
    pub accepted: usize,
}

/// `L_i S` for the current row `i`.
fn row_times_s(state: &CriterionState, i: usize, out: &mut [i64]) {
    out.fill(0);
    for m in 0..out.len() {
        let lm = state.l(i, m);
        for (o, s) in out.iter_mut().zip(state.s_row(m)) {
            *o += lm * s;
        }
    }
}

/// Runs exchange passes until a pass accepts nothing or `max_passes` is hit.
pub fn optimize_from(design: Design, max_passes: usize) -> Result<Optimized> {
    optimize_traced(design, max_passes, None)
}

/// As [`optimize_from`], additionally pushing `Q` after every accepted move.
pub fn optimize_traced(design: Design, max_passes: usize, mut trace: Option<&mut Vec<i64>>) -> Result<Optimized> {
    design.validate()?;
    let mut state = build_state(design)?;
    let (n, k, c) = (state.design().n(), state.design().k(), state.design().c());
    let n_i = n as i64;
    let k_i = k as i64;
    let mut w = vec![0i64; k + 1];
    let mut passes = 0;
    let mut accepted = 0;
    let mut converged = false;
    let mut record = |state: &CriterionState| {
        if let Some(t) = trace.as_deref_mut() {
            t.push(state.q());
        }
    };

    while passes < max_passes {
        passes += 1;
        let mut changed = false;
        for i in 0..n {
            // 1-coordinate exchanges
            let mut count = state.design().plus_count(i);
            row_times_s(&state, i, &mut w);
            for a in 1..=k {
                let x = state.l(i, a);
                if x == -1 && count >= c {
                    continue;
                }
                // L_{i[a]} S_{:,a} = w_a - x_ia s_aa, and s_aa = n
                let delta = 8 * (k_i - x * (w[a] - x * n_i));
                if delta < 0 {
                    state.flip_in_place(i, a);
                    if x == 1 {
                        count -= 1;
                    } else {
                        count += 1;
                    }
                    row_times_s(&state, i, &mut w);
                    accepted += 1;
                    changed = true;
                    record(&state);
                }
            }

            // 2-coordinate exchanges over the sets at the start of this step
            let plus: Vec<usize> = (1..=k).filter(|&a| state.l(i, a) == 1).collect();
            let mut minus: Vec<usize> = (1..=k).filter(|&a| state.l(i, a) == -1).collect();
            for &a in &plus {
                if minus.is_empty() {
                    break;
                }
                // x_ia = +1, so L_{i[a]} S_{:,b} = w_b - s_ab
                let lsa = w[a] - n_i;
                let s_a = state.s_row(a);
                let mut best: Option<(i64, usize)> = None;
                for (pos, &b) in minus.iter().enumerate() {
                    let score = w[b] - s_a[b] - s_a[b];
                    if best.is_none_or(|(s, _)| score < s) {
                        best = Some((score, pos));
                    }
                }
                let (score, pos) = best.expect("minus is nonempty");
                let delta = 8 * (2 * (k_i - 1) + n_i - lsa + score);
                if delta < 0 {
                    let b = minus[pos];
                    state.flip_in_place(i, a);
                    state.flip_in_place(i, b);
                    minus[pos] = a;
                    minus.sort_unstable();
                    row_times_s(&state, i, &mut w);
                    accepted += 1;
                    changed = true;
                    record(&state);
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    Ok(Optimized { state, passes, converged, accepted })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartRecord {
    pub start: usize,
    pub seed: u64,
    pub q: i64,
    pub ue_s2: f64,
    pub passes: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub best: CriterionState,
    pub best_start: usize,
    pub converged: bool,
    pub log: Vec<StartRecord>,
}

/// Runs `config.starts` independent starts and returns the lowest `Q`, ties
/// going to the lowest start index.
pub fn construct(config: &ConstructConfig) -> Result<Construction> {
    config.validate()?;
    let results: Vec<(StartRecord, Optimized)> = (0..config.starts)
        .into_par_iter()
        .map(|start| -> Result<(StartRecord, Optimized)> {
            let seed = config.start_seed(start);
            let init = init_with_rule(config.n, config.k, config.c, seed, config.init)?;
            let opt = optimize_from(init, config.max_passes)?;
            let record = StartRecord {
                start,
                seed,
                q: opt.state.q(),
                ue_s2: opt.state.ue_s2().value(),
                passes: opt.passes,
                converged: opt.converged,
            };
            Ok((record, opt))
        })
        .collect::<Result<_>>()?;

    let (best_idx, _) = results
        .iter()
        .enumerate()
        .min_by_key(|(idx, (rec, _))| (rec.q, *idx))
        .expect("starts >= 1");
    let log = results.iter().map(|(rec, _)| rec.clone()).collect();
    let (_, best) = results.into_iter().nth(best_idx).expect("index from enumerate");
    Ok(Construction { best_start: best_idx, converged: best.converged, best: best.state, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::row_slack;

    #[test]
    fn init_respects_constraint_and_seed() {
        let a = random_feasible_init(4, 4, 1, 11).unwrap();
        let b = random_feasible_init(4, 4, 1, 11).unwrap();
        assert_eq!(a, b);
        assert!((0..4).all(|i| a.plus_count(i) <= 1));
        let full = random_feasible_init(6, 5, 5, 3).unwrap();
        assert!(full.validate().is_ok());
        assert!(random_feasible_init(2, 3, 4, 0).is_err());
        assert!(random_feasible_init(2, 3, 0, 0).is_err());
    }

    #[test]
    fn tight_init_has_zero_slack() {
        let d = init_with_rule(5, 9, 4, 1, InitRule::Tight).unwrap();
        assert!(row_slack(&d).unwrap().is_tight());
    }

    #[test]
    fn optimum_is_a_fixed_point() {
        let rows: Vec<Vec<i8>> = (0..4).map(|i| (0..4).map(|j| if i == j { 1 } else { -1 }).collect()).collect();
        let d = Design::from_rows(&rows, 1).unwrap();
        let out = optimize_from(d.clone(), 100).unwrap();
        assert_eq!(out.passes, 1);
        assert!(out.converged);
        assert_eq!(out.state.design(), &d);
        assert_eq!(out.state.q(), 112);
    }

    #[test]
    fn trace_strictly_decreases() {
        let d = random_feasible_init(12, 20, 6, 5).unwrap();
        let q0 = build_state(d.clone()).unwrap().q();
        let mut trace = vec![q0];
        let out = optimize_traced(d, 100, Some(&mut trace)).unwrap();
        assert!(trace.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(*trace.last().unwrap(), out.state.q());
        assert!(out.state.is_consistent());
        assert!(out.state.design().validate().is_ok());
    }

    #[test]
    fn pass_cap_is_reported() {
        let d = random_feasible_init(10, 15, 5, 2).unwrap();
        let out = optimize_from(d, 1).unwrap();
        assert_eq!(out.passes, 1);
        assert!(!out.converged || out.accepted == 0);
    }

    #[test]
    fn single_start_matches_pipeline() {
        let cfg = ConstructConfig::new(6, 8, 3).starts(1).seed(99);
        let built = construct(&cfg).unwrap();
        let manual = optimize_from(random_feasible_init(6, 8, 3, cfg.start_seed(0)).unwrap(), cfg.max_passes).unwrap();
        assert_eq!(built.best, manual.state);
    }

    #[test]
    fn construct_is_deterministic() {
        let cfg = ConstructConfig::new(8, 12, 4).starts(10).seed(7);
        let a = construct(&cfg).unwrap();
        let b = construct(&cfg).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.log, b.log);
    }
}
