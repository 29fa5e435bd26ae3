//! Exchange moves on a single design row, their exact effect on `Q`, and the
//! matching in-place updates of `S`.
//!
//! Every delta here is evaluated against the current `S` without touching it.
//! `lsj(i, a, b)` below is the inner product of row `i` of `L` with entry `a`
//! zeroed, against column `b` of `S`.

use serde::Serialize;

use crate::criterion::CriterionState;
use crate::error::{Error, Result};

/// A move on design row `row`; factor indices are zero-based design columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    Flip { row: usize, col: usize },
    /// Exchanges a `+1` at `plus` with a `-1` at `minus`, keeping the row count.
    Swap { row: usize, plus: usize, minus: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExchangeDelta {
    pub mv: Move,
    pub delta_q: i64,
}

impl ExchangeDelta {
    pub fn improves(&self) -> bool {
        self.delta_q < 0
    }
}

/// `L_{i[a]} S_{:,b}`.
#[inline]
pub(crate) fn lsj(state: &CriterionState, i: usize, a: usize, b: usize) -> i64 {
    let dim = state.design().k() + 1;
    let mut acc = 0i64;
    for m in 0..dim {
        if m != a {
            acc += state.l(i, m) * state.s(m, b);
        }
    }
    acc
}

fn check_cell(state: &CriterionState, i: usize, j: usize) -> Result<()> {
    let d = state.design();
    if i >= d.n() || j >= d.k() {
        return Err(Error::Index(format!("cell ({i}, {j}) outside a {}x{} design", d.n(), d.k())));
    }
    Ok(())
}

/// Change in `Q` from flipping `x_ij`: `8 (k - x_ij L_{i[j]} S_{:,j})`.
pub fn delta_flip(state: &CriterionState, i: usize, j: usize) -> Result<ExchangeDelta> {
    check_cell(state, i, j)?;
    Ok(ExchangeDelta { mv: Move::Flip { row: i, col: j }, delta_q: flip_delta_unchecked(state, i, j + 1) })
}

#[inline]
pub(crate) fn flip_delta_unchecked(state: &CriterionState, i: usize, a: usize) -> i64 {
    let k = state.design().k() as i64;
    8 * (k - state.l(i, a) * lsj(state, i, a, a))
}

/// Change in `Q` from swapping `x_ij = +1` with `x_il = -1`:
/// `8 [2(k-1) + n - L_{i[j]} S_{:,j} + L_{i[j]} S_{:,l} - s_jl]`.
pub fn delta_swap(state: &CriterionState, i: usize, j: usize, l: usize) -> Result<ExchangeDelta> {
    check_cell(state, i, j)?;
    check_cell(state, i, l)?;
    let d = state.design();
    if d.get(i, j) != 1 || d.get(i, l) != -1 {
        return Err(Error::Parameter(format!(
            "swap needs x[{i},{j}] = +1 and x[{i},{l}] = -1, found {} and {}",
            d.get(i, j),
            d.get(i, l)
        )));
    }
    let (a, b) = (j + 1, l + 1);
    let lsa = lsj(state, i, a, a);
    let lsb = lsj(state, i, a, b);
    Ok(ExchangeDelta { mv: Move::Swap { row: i, plus: j, minus: l }, delta_q: swap_delta_from(state, lsa, lsb, a, b) })
}

#[inline]
pub(crate) fn swap_delta_from(state: &CriterionState, lsa: i64, lsb: i64, a: usize, b: usize) -> i64 {
    let n = state.design().n() as i64;
    let k = state.design().k() as i64;
    8 * (2 * (k - 1) + n - lsa + lsb - state.s(a, b))
}

/// Whether [`delta_general`] may include the intercept column in `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterceptPolicy {
    Reject,
    /// Only meaningful for checking the identity itself; flipping the
    /// intercept does not correspond to a design.
    Allow,
}

/// Change in `Q` when every entry of row `i` of `L` indexed by `cols` changes
/// sign: `8|J|(k+1-|J|) - 8 sum_{a in J} x_ia sum_{b not in J} s_ab x_ib`.
///
/// `cols` holds `L` column indices, where 0 is the intercept and factor `j`
/// is `j + 1`. Duplicates are ignored.
pub fn delta_general(state: &CriterionState, i: usize, cols: &[usize], policy: InterceptPolicy) -> Result<i64> {
    let d = state.design();
    let dim = d.k() + 1;
    if i >= d.n() {
        return Err(Error::Index(format!("row {i} outside a design with {} rows", d.n())));
    }
    let mut in_j = vec![false; dim];
    for &a in cols {
        if a >= dim {
            return Err(Error::Index(format!("column {a} outside 0..={}", d.k())));
        }
        if a == 0 && policy == InterceptPolicy::Reject {
            return Err(Error::Parameter("the intercept column cannot be flipped".into()));
        }
        in_j[a] = true;
    }
    let size = in_j.iter().filter(|&&f| f).count() as i64;
    if size == 0 {
        return Ok(0);
    }
    let mut cross = 0i64;
    for a in (0..dim).filter(|&a| in_j[a]) {
        let inner: i64 = (0..dim).filter(|&b| !in_j[b]).map(|b| state.s(a, b) * state.l(i, b)).sum();
        cross += state.l(i, a) * inner;
    }
    Ok(8 * size * (dim as i64 - size) - 8 * cross)
}

/// Applies a move with the rank-2 updates of `S` and returns the change in `Q`.
///
/// The move is assumed to have been validated by the matching delta call. In
/// debug builds the result is checked against a full rebuild.
pub fn apply_move(state: &mut CriterionState, mv: Move) -> Result<i64> {
    let delta = match mv {
        Move::Flip { row, col } => {
            check_cell(state, row, col)?;
            state.flip_in_place(row, col + 1)
        }
        Move::Swap { row, plus, minus } => {
            delta_swap(state, row, plus, minus)?;
            state.flip_in_place(row, plus + 1) + state.flip_in_place(row, minus + 1)
        }
    };
    debug_assert!(state.is_consistent(), "incremental update diverged from rebuild");
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::build_state;
    use crate::design::Design;

    fn small() -> CriterionState {
        build_state(Design::from_rows(&[vec![1, -1], vec![-1, -1]], 1).unwrap()).unwrap()
    }

    #[test]
    fn flip_example() {
        let st = small();
        let d = delta_flip(&st, 0, 0).unwrap();
        assert_eq!(d.delta_q, 16);
        let mut after = st.clone();
        apply_move(&mut after, d.mv).unwrap();
        assert_eq!(after.q(), 36);
    }

    #[test]
    fn swap_example() {
        let st = small();
        let d = delta_swap(&st, 0, 0, 1).unwrap();
        assert_eq!(d.delta_q, 0);
        let mut after = st.clone();
        apply_move(&mut after, d.mv).unwrap();
        assert_eq!(after.q(), 20);
        assert_eq!(after.design().plus_count(0), 1);
    }

    #[test]
    fn swap_sign_precondition() {
        assert!(delta_swap(&small(), 0, 1, 0).is_err());
        assert!(delta_swap(&small(), 1, 0, 1).is_err());
    }

    #[test]
    fn flip_is_an_involution() {
        let mut st = small();
        let first = apply_move(&mut st, Move::Flip { row: 1, col: 1 }).unwrap();
        let second = apply_move(&mut st, Move::Flip { row: 1, col: 1 }).unwrap();
        assert_eq!(first + second, 0);
        assert_eq!(st, small());
    }

    #[test]
    fn zero_inner_product_gives_8k() {
        // single orthogonal column: L_{i[1]} S_{:,1} = s_01 = 0
        let st = build_state(Design::from_rows(&[vec![1], vec![-1]], 1).unwrap()).unwrap();
        assert_eq!(lsj(&st, 0, 1, 1), 0);
        assert_eq!(delta_flip(&st, 0, 0).unwrap().delta_q, 8);
    }

    #[test]
    fn general_delta_edges() {
        let st = small();
        assert_eq!(delta_general(&st, 0, &[], InterceptPolicy::Reject).unwrap(), 0);
        assert!(delta_general(&st, 0, &[0], InterceptPolicy::Reject).is_err());
        assert_eq!(delta_general(&st, 0, &[1], InterceptPolicy::Reject).unwrap(), 16);
        assert_eq!(delta_general(&st, 0, &[1, 2], InterceptPolicy::Reject).unwrap(), 0);
        // flipping the entire L row leaves S unchanged
        assert_eq!(delta_general(&st, 1, &[0, 1, 2], InterceptPolicy::Allow).unwrap(), 0);
    }

    #[test]
    fn out_of_range() {
        assert!(delta_flip(&small(), 2, 0).is_err());
        assert!(delta_flip(&small(), 0, 2).is_err());
    }
}
