use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LatticeError;
use crate::basis::IntVector;

/// Dense rectangular integer matrix. Its rows span a lattice in `Z^columns`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    columns: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(columns: usize, rows: Vec<Vec<BigInt>>) -> Result<IntMatrix, LatticeError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != columns) {
            return Err(LatticeError::DimensionMismatch {
                expected: columns,
                got: bad.len(),
            });
        }
        Ok(IntMatrix { columns, rows })
    }

    pub fn from_rows(columns: usize, rows: Vec<IntVector>) -> Result<IntMatrix, LatticeError> {
        IntMatrix::new(columns, rows.into_iter().map(|r| r.0).collect())
    }

    /// Panics on ragged input; meant for literals.
    pub fn from_i64(columns: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::new(
            columns,
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn zeros(nrows: usize, columns: usize) -> IntMatrix {
        IntMatrix {
            columns,
            rows: vec![vec![BigInt::zero(); columns]; nrows],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<Vec<BigInt>> {
        &mut self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.columns, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.rows[j][i] = v.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.columns, other.nrows(), "inner dimensions differ");
        let mut out = IntMatrix::zeros(self.nrows(), other.columns);
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.rows[k].iter().enumerate() {
                    if !b.is_zero() {
                        out.rows[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coeffs.len(), self.nrows());
        let mut out = vec![BigInt::zero(); self.columns];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                *o += c * v;
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.nrows();
        assert_eq!(n, self.columns, "determinant of a non-square matrix");
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Order of an element in an abelian group: a positive integer or infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl Order {
    pub fn one() -> Order {
        Order::Finite(BigUint::one())
    }

    pub fn finite(n: u64) -> Order {
        assert!(n > 0, "orders are positive");
        Order::Finite(BigUint::from(n))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Order::Finite(n) if n.is_one())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Order::Infinite)
    }

    /// Least common multiple; infinite absorbs.
    pub fn lcm(&self, other: &Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.lcm(b)),
            _ => Order::Infinite,
        }
    }

    /// True if this order divides `n`.
    pub fn divides(&self, n: u64) -> bool {
        match self {
            Order::Finite(a) => (BigUint::from(n) % a).is_zero(),
            Order::Infinite => false,
        }
    }

    pub(crate) fn from_bigint(n: &BigInt) -> Order {
        Order::Finite(n.abs().to_biguint().expect("absolute value"))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

impl std::str::FromStr for Order {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "infinite" {
            return Ok(Order::Infinite);
        }
        let n: BigUint = s.parse().map_err(|_| format!("bad order {s:?}"))?;
        if n.is_zero() {
            return Err("orders are positive".to_string());
        }
        Ok(Order::Finite(n))
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
