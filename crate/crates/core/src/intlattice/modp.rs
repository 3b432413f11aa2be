//! Rank computations modulo a prime.
//!
//! If `t` is not in `L + pZ^n` it is not in `L`; the converse fails, so
//! these checks can only ever reject membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::SparseRow;

/// Echelon basis of a row space over `F_p`, rows kept normalized (pivot 1).
#[derive(Clone, Debug)]
pub struct ModpEchelon {
    p: u64,
    by_pivot: Vec<Option<usize>>,
    rows: Vec<Vec<(u32, u64)>>,
}

fn residue(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("reduced residue")
}

fn inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl ModpEchelon {
    pub fn new(columns: usize, p: u64) -> ModpEchelon {
        assert!(is_prime(p), "{p} is not prime");
        assert!(p < (1 << 31), "prime too large for the word-sized kernel");
        ModpEchelon {
            p,
            by_pivot: vec![None; columns],
            rows: Vec::new(),
        }
    }

    pub fn from_rows<'a, I: IntoIterator<Item = &'a SparseRow>>(columns: usize, p: u64, rows: I) -> ModpEchelon {
        let mut e = ModpEchelon::new(columns, p);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn to_residues(&self, row: &SparseRow) -> Vec<(u32, u64)> {
        row.entries()
            .iter()
            .map(|(c, v)| (*c, residue(v, self.p)))
            .filter(|(_, v)| *v != 0)
            .collect()
    }

    fn reduce(&self, mut row: Vec<(u32, u64)>) -> Vec<(u32, u64)> {
        let p = self.p;
        let mut start = 0;
        while start < row.len() {
            let (col, val) = row[start];
            let Some(ri) = self.by_pivot[col as usize] else {
                start += 1;
                continue;
            };
            // row -= val * basis_row (basis row has pivot 1 at col)
            let basis = &self.rows[ri];
            let factor = p - val;
            let mut out = Vec::with_capacity(row.len() + basis.len());
            out.extend_from_slice(&row[..start]);
            let (mut i, mut j) = (start, 0);
            while i < row.len() || j < basis.len() {
                if j == basis.len() || (i < row.len() && row[i].0 < basis[j].0) {
                    out.push(row[i]);
                    i += 1;
                } else if i == row.len() || basis[j].0 < row[i].0 {
                    out.push((basis[j].0, basis[j].1 * factor % p));
                    j += 1;
                } else {
                    let v = (row[i].1 + basis[j].1 * factor) % p;
                    if v != 0 {
                        out.push((row[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            row = out;
        }
        row
    }

    /// Adds a row; returns true if the rank grew.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let reduced = self.reduce(self.to_residues(row));
        let Some(&(col, lead)) = reduced.iter().find(|(c, _)| self.by_pivot[*c as usize].is_none()) else {
            return false;
        };
        // Normalize on the first free column; earlier entries are all pivots
        // of existing rows and were cleared by `reduce`.
        debug_assert_eq!(reduced[0].0, col);
        let inv = inverse(lead, self.p);
        let normalized: Vec<(u32, u64)> = reduced.iter().map(|(c, v)| (*c, v * inv % self.p)).collect();
        self.by_pivot[col as usize] = Some(self.rows.len());
        self.rows.push(normalized);
        true
    }

    /// True if `t` lies in the `F_p`-span of the rows.
    pub fn spans(&self, t: &SparseRow) -> bool {
        self.reduce(self.to_residues(t)).is_empty()
    }
}

/// Sound rejection: true means `t` is certainly not in the integer row
/// lattice of `rows`.
pub fn excludes(echelon: &ModpEchelon, t: &SparseRow) -> bool {
    !echelon.spans(t)
}
