//! Row Hermite normal form with a unimodular transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `transform * input = h`, with `h` in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub transform: IntMatrix,
    /// Pivot column of each nonzero row of `h`, increasing.
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn sub_scaled(rows: &mut [Vec<BigInt>], target: usize, q: &BigInt, source: usize) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < source {
        let (a, b) = rows.split_at_mut(source);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(target);
        (&mut b[0], &a[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row {
        *x = -std::mem::take(x);
    }
}

/// Computes the row HNF: pivots positive, entries above a pivot in
/// `[0, pivot)`, zero rows last.
///
/// Within each column the pivot row is always the one whose entry has the
/// least nonzero absolute value, and the remaining rows are reduced modulo
/// it until the column is cleared below the pivot.
pub fn hnf(m: &IntMatrix) -> HermiteForm {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(nrows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        loop {
            let best = (r..nrows)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()).then(a.cmp(&b)));
            let Some(best) = best else { break };
            h.rows_mut().swap(r, best);
            u.rows_mut().swap(r, best);
            let pivot = h.get(r, col).clone();
            let mut cleared = true;
            for i in r + 1..nrows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(&pivot);
                sub_scaled(h.rows_mut(), i, &q, r);
                sub_scaled(u.rows_mut(), i, &q, r);
                if !h.get(i, col).is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if r < nrows && !h.get(r, col).is_zero() {
            if h.get(r, col).is_negative() {
                negate(&mut h.rows_mut()[r]);
                negate(&mut u.rows_mut()[r]);
            }
            let pivot = h.get(r, col).clone();
            for i in 0..r {
                let q = h.get(i, col).div_floor(&pivot);
                sub_scaled(h.rows_mut(), i, &q, r);
                sub_scaled(u.rows_mut(), i, &q, r);
            }
            pivots.push(col);
            r += 1;
        }
    }
    HermiteForm {
        h,
        transform: u,
        pivots,
    }
}

/// Coefficients `c` over the nonzero rows of `form.h` with `c * h = t`, if any.
pub(crate) fn solve_against_hermite(form: &HermiteForm, t: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut residual = t.to_vec();
    let mut coeffs = Vec::with_capacity(form.rank());
    let mut next = 0;
    for col in 0..residual.len() {
        if next < form.pivots.len() && form.pivots[next] == col {
            let row = form.h.row(next);
            let (q, rem) = residual[col].div_rem(&row[col]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in residual.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coeffs.push(q);
            next += 1;
        } else if !residual[col].is_zero() {
            return None;
        }
    }
    Some(coeffs)
}
