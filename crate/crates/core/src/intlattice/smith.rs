//! Smith normal form of dense integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Invariant factors `d_1 | d_2 | ... | d_r` of a matrix, optionally with
/// unimodular `left`, `right` such that `left * M * right` is diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariants: Vec<BigInt>,
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

pub fn snf(m: &IntMatrix) -> SmithForm {
    run(m, false)
}

pub fn snf_with_transforms(m: &IntMatrix) -> SmithForm {
    run(m, true)
}

struct Work {
    a: Vec<Vec<BigInt>>,
    left: Option<Vec<Vec<BigInt>>>,
    right: Option<Vec<Vec<BigInt>>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(l) = &mut self.left {
            l.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(r) = &mut self.right {
            for row in r {
                row.swap(i, j);
            }
        }
    }

    // row_i += q * row_j
    fn add_row(&mut self, i: usize, q: &BigInt, j: usize) {
        add_row(&mut self.a, i, q, j);
        if let Some(l) = &mut self.left {
            add_row(l, i, q, j);
        }
    }

    // col_i += q * col_j
    fn add_col(&mut self, i: usize, q: &BigInt, j: usize) {
        for row in &mut self.a {
            let v = q * &row[j];
            row[i] += v;
        }
        if let Some(r) = &mut self.right {
            for row in r {
                let v = q * &row[j];
                row[i] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(l) = &mut self.left {
            for x in &mut l[i] {
                *x = -std::mem::take(x);
            }
        }
    }
}

fn add_row(rows: &mut [Vec<BigInt>], i: usize, q: &BigInt, j: usize) {
    if q.is_zero() {
        return;
    }
    let src = rows[j].clone();
    for (x, y) in rows[i].iter_mut().zip(&src) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

fn run(m: &IntMatrix, transforms: bool) -> SmithForm {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut w = Work {
        a: m.rows().to_vec(),
        left: transforms.then(|| IntMatrix::identity(nrows).rows().to_vec()),
        right: transforms.then(|| IntMatrix::identity(ncols).rows().to_vec()),
    };
    let mut invariants = Vec::new();
    for t in 0..nrows.min(ncols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                let v = &w.a[i][j];
                if v.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| v.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let pivot = w.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..nrows {
                if !w.a[i][t].is_zero() {
                    let q = -w.a[i][t].div_floor(&pivot);
                    w.add_row(i, &q, t);
                    dirty |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..ncols {
                if !w.a[t][j].is_zero() {
                    let q = -w.a[t][j].div_floor(&pivot);
                    w.add_col(j, &q, t);
                    dirty |= !w.a[t][j].is_zero();
                }
            }
            if dirty {
                let mut pos = (t, t);
                for i in t + 1..nrows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[pos.0][pos.1].abs() {
                        pos = (i, t);
                    }
                }
                for j in t + 1..ncols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[pos.0][pos.1].abs() {
                        pos = (t, j);
                    }
                }
                if pos.0 != t {
                    w.swap_rows(t, pos.0);
                }
                if pos.1 != t {
                    w.swap_cols(t, pos.1);
                }
                continue;
            }
            // Row and column cleared; enforce divisibility of the rest.
            let offender = (t + 1..nrows).find(|&i| {
                (t + 1..ncols).any(|j| !(&w.a[i][j] % &pivot).is_zero())
            });
            match offender {
                Some(i) => w.add_row(t, &BigInt::one(), i),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        invariants.push(w.a[t][t].clone());
    }
    let to_matrix = |rows: Vec<Vec<BigInt>>, n: usize| IntMatrix::new(n, rows).expect("square transform");
    SmithForm {
        invariants,
        left: w.left.map(|l| to_matrix(l, nrows)),
        right: w.right.map(|r| to_matrix(r, ncols)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_invariants() {
        assert_eq!(snf(&IntMatrix::identity(4)).invariants, ints(&[1, 1, 1, 1]));
    }

    #[test]
    fn small_examples() {
        let m = IntMatrix::from_i64(2, &[&[2, 4], &[6, 8]]);
        assert_eq!(snf(&m).invariants, ints(&[2, 4]));
        let m = IntMatrix::from_i64(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(snf(&m).invariants, ints(&[1, 6]));
        assert!(snf(&IntMatrix::zeros(2, 2)).invariants.is_empty());
    }

    #[test]
    fn transforms_diagonalize() {
        let m = IntMatrix::from_i64(3, &[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16], &[1, 1, 1]]);
        let f = snf_with_transforms(&m);
        let left = f.left.as_ref().unwrap();
        let right = f.right.as_ref().unwrap();
        let d = left.mul(&m).mul(right);
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                let expected = if i == j && i < f.rank() {
                    f.invariants[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(d.get(i, j), &expected);
            }
        }
        assert_eq!(left.det().abs(), BigInt::one());
        assert_eq!(right.det().abs(), BigInt::one());
        assert!(f.invariants.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }
}
