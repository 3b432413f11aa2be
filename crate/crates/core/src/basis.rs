//! Monomial bases of multidegree components and coordinate vectors.
//!
//! The words of a fixed multidegree are the distinct permutations of a
//! multiset of letters. They are listed in lexicographic order (which is the
//! global monomial order, since all of them have the same length) and a
//! word's column is its lexicographic rank, computed directly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freering::{Monomial, MultiDegree, Polynomial, Variable};

/// Default bound on the total degree of a component (8! = 40320 columns).
pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// Degrees beyond this never fit a dense basis, whatever the configured cap.
pub const HARD_DEGREE_LIMIT: u32 = 20;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BasisError {
    #[error("total degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("polynomial term {monomial} does not have multidegree {expected}")]
    Inhomogeneous { monomial: String, expected: String },
    #[error("vector of length {got} does not match a basis of size {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

/// Dense integer coordinates with respect to a [`ComponentBasis`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zeros(len: usize) -> IntVector {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn from_i64(values: &[i64]) -> IntVector {
        IntVector(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn scaled(&self, c: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * c).collect())
    }

    /// Nonzero entries as `(column, value)` pairs.
    pub fn sparse(&self) -> Vec<(usize, BigInt)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect()
    }
}

impl std::ops::Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.len(), rhs.len());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// All words of one multidegree, in the global monomial order.
#[derive(Clone, Debug)]
pub struct ComponentBasis {
    degree: MultiDegree,
    letters: Vec<Variable>,
    counts: Vec<u32>,
    monomials: Vec<Monomial>,
}

/// Number of distinct words of multidegree `d`: `(sum e)! / prod(e!)`.
pub fn component_dimension(d: &MultiDegree) -> u128 {
    let counts: Vec<u32> = d.iter().map(|(_, e)| e).collect();
    multinomial(&counts)
}

fn multinomial(counts: &[u32]) -> u128 {
    let mut acc: u128 = 1;
    let mut n: u128 = 0;
    for &c in counts {
        for i in 1..=c as u128 {
            n += 1;
            acc = acc * n / i;
        }
    }
    acc
}

/// Checks the total degree of `d` against `cap`; nothing is allocated.
pub fn check_degree_cap(d: &MultiDegree, cap: u32) -> Result<(), BasisError> {
    let degree = d.total();
    let cap = cap.min(HARD_DEGREE_LIMIT);
    if degree > cap {
        return Err(BasisError::DegreeCap { degree, cap });
    }
    Ok(())
}

/// Enumerates the component basis of `d` in canonical order.
pub fn enumerate_basis(d: &MultiDegree, cap: u32) -> Result<ComponentBasis, BasisError> {
    check_degree_cap(d, cap)?;
    let letters: Vec<Variable> = d.iter().map(|(v, _)| v).collect();
    let counts: Vec<u32> = d.iter().map(|(_, e)| e).collect();
    let mut word = d.sorted_letters();
    let mut monomials = Vec::with_capacity(component_dimension(d) as usize);
    loop {
        monomials.push(Monomial::from_vars(word.clone()));
        if !next_permutation(&mut word) {
            break;
        }
    }
    Ok(ComponentBasis {
        degree: d.clone(),
        letters,
        counts,
        monomials,
    })
}

/// Advances to the lexicographically next arrangement; false after the last.
fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

impl ComponentBasis {
    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    /// Column of `m`, or `None` if `m` has a different multidegree.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        let mut counts = self.counts.clone();
        let mut remaining: u128 = counts.iter().map(|&c| c as u128).sum();
        if m.len() as u128 != remaining {
            return None;
        }
        let mut perms = multinomial(&counts);
        let mut rank: u128 = 0;
        for v in m.vars() {
            let pos = self.letters.binary_search(v).ok()?;
            if counts[pos] == 0 {
                return None;
            }
            for &c in &counts[..pos] {
                rank += perms * c as u128 / remaining;
            }
            perms = perms * counts[pos] as u128 / remaining;
            counts[pos] -= 1;
            remaining -= 1;
        }
        Some(rank as usize)
    }

    /// Coordinates of a polynomial whose terms all have this multidegree.
    pub fn vectorize(&self, p: &Polynomial) -> Result<IntVector, BasisError> {
        let mut out = IntVector::zeros(self.len());
        for (col, c) in self.sparse_coordinates(p)? {
            out.0[col] = c;
        }
        Ok(out)
    }

    /// Nonzero coordinates sorted by column.
    pub fn sparse_coordinates(&self, p: &Polynomial) -> Result<Vec<(usize, BigInt)>, BasisError> {
        let mut out = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let col = self.index_of(m).ok_or_else(|| BasisError::Inhomogeneous {
                monomial: m.to_string(),
                expected: self.degree.to_string(),
            })?;
            out.push((col, c.clone()));
        }
        out.sort_by_key(|(col, _)| *col);
        Ok(out)
    }

    pub fn devectorize(&self, v: &IntVector) -> Result<Polynomial, BasisError> {
        if v.len() != self.len() {
            return Err(BasisError::LengthMismatch {
                got: v.len(),
                expected: self.len(),
            });
        }
        let mut p = Polynomial::zero();
        for (i, c) in v.0.iter().enumerate() {
            p.add_term(self.monomials[i].clone(), c.clone());
        }
        Ok(p)
    }
}
