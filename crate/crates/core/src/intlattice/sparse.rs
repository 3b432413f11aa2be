use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sparse integer row: `(column, value)` pairs, strictly increasing columns,
/// no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseRow {
    entries: Vec<(u32, BigInt)>,
}

impl SparseRow {
    pub fn new() -> SparseRow {
        SparseRow::default()
    }

    pub fn unit(col: u32) -> SparseRow {
        SparseRow {
            entries: vec![(col, BigInt::one())],
        }
    }

    /// Builds from pairs in any order; duplicates are summed, zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, BigInt)>>(pairs: I) -> SparseRow {
        let mut entries: Vec<(u32, BigInt)> = pairs.into_iter().collect();
        entries.sort_by_key(|(c, _)| *c);
        let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseRow { entries: out }
    }

    pub fn from_dense(values: &[BigInt]) -> SparseRow {
        SparseRow {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i as u32, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (c, v) in &self.entries {
            out[*c as usize] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(u32, BigInt)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lead(&self) -> Option<(u32, &BigInt)> {
        self.entries.first().map(|(c, v)| (*c, v))
    }

    pub fn get(&self, col: u32) -> Option<&BigInt> {
        self.entries
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn negate(&mut self) {
        for (_, v) in &mut self.entries {
            *v = -std::mem::take(v);
        }
    }

    pub fn scale(&self, a: &BigInt) -> SparseRow {
        if a.is_zero() {
            return SparseRow::new();
        }
        SparseRow {
            entries: self.entries.iter().map(|(c, v)| (*c, v * a)).collect(),
        }
    }

    /// `a * x + b * y`.
    pub fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
        let a_one = a.is_one();
        let b_one = b.is_one();
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        let xs = &x.entries;
        let ys = &y.entries;
        while i < xs.len() || j < ys.len() {
            let take_x = j == ys.len() || (i < xs.len() && xs[i].0 < ys[j].0);
            let take_y = i == xs.len() || (j < ys.len() && ys[j].0 < xs[i].0);
            if take_x {
                let v = if a_one { xs[i].1.clone() } else { a * &xs[i].1 };
                if !v.is_zero() {
                    out.push((xs[i].0, v));
                }
                i += 1;
            } else if take_y {
                let v = if b_one { ys[j].1.clone() } else { b * &ys[j].1 };
                if !v.is_zero() {
                    out.push((ys[j].0, v));
                }
                j += 1;
            } else {
                let mut v = if a_one { xs[i].1.clone() } else { a * &xs[i].1 };
                if b_one {
                    v += &ys[j].1;
                } else {
                    v += b * &ys[j].1;
                }
                if !v.is_zero() {
                    out.push((xs[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseRow { entries: out }
    }

    /// `self += q * other`.
    pub fn add_scaled(&mut self, q: &BigInt, other: &SparseRow) {
        if q.is_zero() || other.is_empty() {
            return;
        }
        *self = SparseRow::combine(&BigInt::one(), self, q, other);
    }
}
