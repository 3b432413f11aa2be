//! Exact linear algebra over integer row lattices.
//!
//! Dense routines ([`hnf`], [`snf`]) carry full unimodular transforms and
//! serve the small-matrix API. Large sparse lattices go through
//! [`EchelonBasis`], which keeps a Z-basis in echelon form together with
//! enough history to express any member in the original generators.

mod cache;
mod echelon;
mod hermite;
mod matrix;
pub mod modp;
mod smith;
mod sparse;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use cache::write_atomic;
pub use cache::{CacheError, MatrixFile, MATRIX_FILE_VERSION};
pub use echelon::{BasisRow, EchelonBasis, Reduction};
pub use hermite::{hnf, HermiteForm};
pub use matrix::{IntMatrix, Order};
pub use smith::{snf, snf_with_transforms, SmithForm};
pub use sparse::SparseRow;

use crate::basis::IntVector;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Integer coefficients over generator rows; `sum c_i * row_i = target`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    #[serde(with = "cache::decimal_map")]
    pub coefficients: BTreeMap<usize, BigInt>,
}

impl MembershipCertificate {
    pub fn from_sparse(row: &SparseRow) -> MembershipCertificate {
        MembershipCertificate {
            coefficients: row
                .entries()
                .iter()
                .map(|(i, v)| (*i as usize, v.clone()))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Hex SHA-256 of the canonical `index:value;` listing.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for (i, v) in &self.coefficients {
            h.update(format!("{i}:{v};").as_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Structure of `Z^columns / lattice`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientStructure {
    pub free_rank: usize,
    #[serde(with = "cache::decimal_vec")]
    pub torsion: Vec<BigInt>,
}

fn check_len(m: &IntMatrix, t: &IntVector) -> Result<(), LatticeError> {
    if t.len() != m.ncols() {
        return Err(LatticeError::DimensionMismatch {
            expected: m.ncols(),
            got: t.len(),
        });
    }
    Ok(())
}

/// Decides whether `t` lies in the row lattice of `m`, via the Hermite form.
pub fn lattice_member(m: &IntMatrix, t: &IntVector) -> Result<Option<MembershipCertificate>, LatticeError> {
    check_len(m, t)?;
    let form = hnf(m);
    let Some(coeffs) = hermite::solve_against_hermite(&form, t.entries()) else {
        return Ok(None);
    };
    // Row i of h is row i of transform times m.
    let mut padded = coeffs;
    padded.resize(m.nrows(), BigInt::zero());
    let over_generators = form.transform.transpose().mul(&IntMatrix::new(1, padded.into_iter().map(|c| vec![c]).collect()).expect("column"));
    let coefficients = over_generators
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r[0].is_zero())
        .map(|(i, r)| (i, r[0].clone()))
        .collect();
    Ok(Some(MembershipCertificate { coefficients }))
}

/// Order of `t` in `Z^n / rowlattice(m)`, read off the Smith decomposition:
/// with `left * m * right = diag(d)`, write `t * right = s`; then `t` has
/// infinite order if `s` is nonzero past the rank, and otherwise order
/// `lcm_i d_i / gcd(d_i, s_i)`.
pub fn order_mod_lattice(m: &IntMatrix, t: &IntVector) -> Result<Order, LatticeError> {
    check_len(m, t)?;
    let form = snf_with_transforms(m);
    let right = form.right.as_ref().expect("transforms requested");
    let s = right.transpose().mul(&IntMatrix::new(1, t.entries().iter().map(|v| vec![v.clone()]).collect()).expect("column"));
    let mut order = BigInt::one();
    for (j, row) in s.rows().iter().enumerate() {
        let sj = &row[0];
        match form.invariants.get(j) {
            Some(d) => {
                let need = d / d.gcd(sj);
                order = order.lcm(&need);
            }
            None if !sj.is_zero() => return Ok(Order::Infinite),
            None => {}
        }
    }
    Ok(Order::from_bigint(&order))
}

/// True iff the certificate recombines the rows of `m` into exactly `t`.
pub fn verify_certificate(m: &IntMatrix, c: &MembershipCertificate, t: &IntVector) -> bool {
    if t.len() != m.ncols() || c.coefficients.keys().any(|&i| i >= m.nrows()) {
        return false;
    }
    let mut acc = vec![BigInt::zero(); m.ncols()];
    for (&i, v) in &c.coefficients {
        for (a, x) in acc.iter_mut().zip(m.row(i)) {
            *a += v * x;
        }
    }
    acc == t.entries()
}

/// Same check against sparse generator rows.
pub fn verify_sparse_certificate(rows: &[SparseRow], c: &MembershipCertificate, t: &SparseRow) -> bool {
    if c.coefficients.keys().any(|&i| i >= rows.len()) {
        return false;
    }
    let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
    for (&i, v) in &c.coefficients {
        for (col, x) in rows[i].entries() {
            *acc.entry(*col).or_insert_with(BigInt::zero) += v * x;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc.len() == t.len() && t.entries().iter().all(|(col, v)| acc.get(col) == Some(v))
}

/// Free rank and torsion invariants of `Z^columns / rowlattice(m)`.
pub fn quotient_invariants(m: &IntMatrix) -> QuotientStructure {
    let form = snf(m);
    QuotientStructure {
        free_rank: m.ncols() - form.rank(),
        torsion: form.invariants.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64(x)
    }

    #[test]
    fn membership_examples() {
        let m = IntMatrix::from_i64(2, &[&[1, 2], &[3, 4]]);
        let c = lattice_member(&m, &v(&[3, 4])).unwrap().unwrap();
        assert!(verify_certificate(&m, &c, &v(&[3, 4])));
        let m = IntMatrix::from_i64(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(lattice_member(&m, &v(&[1, 0])).unwrap(), None);
        let m = IntMatrix::from_i64(2, &[&[1, 1]]);
        let c = lattice_member(&m, &v(&[2, 2])).unwrap().unwrap();
        assert_eq!(c.coefficients, BTreeMap::from([(0, BigInt::from(2))]));
        assert!(lattice_member(&m, &v(&[1])).is_err());
    }

    #[test]
    fn single_row_certificate_is_a_unit() {
        let m = IntMatrix::from_i64(3, &[&[1, 0, 2], &[0, 5, 1], &[4, 4, 4]]);
        let c = lattice_member(&m, &v(&[0, 5, 1])).unwrap().unwrap();
        assert!(verify_certificate(&m, &c, &v(&[0, 5, 1])));
    }

    #[test]
    fn order_examples() {
        let m = IntMatrix::from_i64(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(order_mod_lattice(&m, &v(&[2, 3])).unwrap(), Order::one());
        assert_eq!(order_mod_lattice(&m, &v(&[1, 1])).unwrap(), Order::finite(6));
        let m = IntMatrix::from_i64(2, &[&[2, 0]]);
        assert_eq!(order_mod_lattice(&m, &v(&[0, 1])).unwrap(), Order::Infinite);
    }

    #[test]
    fn certificate_checks() {
        let m = IntMatrix::from_i64(2, &[&[1, 1], &[0, 2]]);
        let t = v(&[1, 3]);
        let mut c = lattice_member(&m, &t).unwrap().unwrap();
        assert!(verify_certificate(&m, &c, &t));
        *c.coefficients.entry(0).or_insert_with(BigInt::zero) += 1;
        assert!(!verify_certificate(&m, &c, &t));
        assert!(verify_certificate(&m, &MembershipCertificate::default(), &v(&[0, 0])));
        let bad = MembershipCertificate {
            coefficients: BTreeMap::from([(7, BigInt::one())]),
        };
        assert!(!verify_certificate(&m, &bad, &t));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_invariants(&IntMatrix::identity(3));
        assert_eq!((q.free_rank, q.torsion.len()), (0, 0));
        let q = quotient_invariants(&IntMatrix::from_i64(2, &[&[3, 0]]));
        assert_eq!((q.free_rank, q.torsion), (1, vec![BigInt::from(3)]));
        let q = quotient_invariants(&IntMatrix::from_i64(2, &[&[2, 4], &[6, 8]]));
        assert_eq!((q.free_rank, q.torsion), (0, vec![BigInt::from(2), BigInt::from(4)]));
    }
}
