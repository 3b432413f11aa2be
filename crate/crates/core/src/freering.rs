//! The free unital associative ring over the integers.
//!
//! Elements are sparse maps from words (monomials) to nonzero big integers.
//! Variables come from a small set of families (`x`, `y`, `z`) with positive
//! indices. Monomials are ordered by length first and then lexicographically
//! on the word, and every basis, matrix column and printed polynomial in this
//! crate uses that order.

mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parser::{parse_expression, ParseError};

/// Symbol family of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    X,
    Y,
    Z,
}

impl Family {
    pub fn from_char(c: char) -> Option<Family> {
        match c {
            'x' => Some(Family::X),
            'y' => Some(Family::Y),
            'z' => Some(Family::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Family::X => 'x',
            Family::Y => 'y',
            Family::Z => 'z',
        }
    }
}

/// A free generator such as `x3` or `y1`. Ordered by family, then index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub family: Family,
    pub index: u32,
}

impl Variable {
    pub fn new(family: Family, index: u32) -> Variable {
        assert!(index >= 1, "variable indices start at 1");
        Variable { family, index }
    }

    pub fn x(index: u32) -> Variable {
        Variable::new(Family::X, index)
    }

    pub fn y(index: u32) -> Variable {
        Variable::new(Family::Y, index)
    }

    pub fn z(index: u32) -> Variable {
        Variable::new(Family::Z, index)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.as_char(), self.index)
    }
}

/// A word in the variables. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(Vec<Variable>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn from_vars(vars: Vec<Variable>) -> Monomial {
        Monomial(vars)
    }

    pub fn var(v: Variable) -> Monomial {
        Monomial(vec![v])
    }

    pub fn vars(&self) -> &[Variable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut word = Vec::with_capacity(self.0.len() + other.0.len());
        word.extend_from_slice(&self.0);
        word.extend_from_slice(&other.0);
        Monomial(word)
    }

    pub fn multidegree(&self) -> MultiDegree {
        let mut d = MultiDegree::zero();
        for &v in &self.0 {
            d.add_var(v, 1);
        }
        d
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Exponent count of each variable occurring in a word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiDegree(BTreeMap<Variable, u32>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid multidegree {text:?}: {reason}")]
pub struct MultiDegreeParseError {
    pub text: String,
    pub reason: String,
}

impl MultiDegree {
    pub fn zero() -> MultiDegree {
        MultiDegree(BTreeMap::new())
    }

    /// Every variable with exponent one.
    pub fn multilinear<I: IntoIterator<Item = Variable>>(vars: I) -> MultiDegree {
        let mut d = MultiDegree::zero();
        for v in vars {
            d.add_var(v, 1);
        }
        d
    }

    /// `x1 x2 ... xn`, the multilinear degree in the first `n` x-variables.
    pub fn multilinear_x(n: u32) -> MultiDegree {
        MultiDegree::multilinear((1..=n).map(Variable::x))
    }

    pub fn add_var(&mut self, v: Variable, e: u32) {
        if e > 0 {
            *self.0.entry(v).or_insert(0) += e;
        }
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Variable, u32)> + '_ {
        self.0.iter().map(|(&v, &e)| (v, e))
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.values().all(|&e| e == 1)
    }

    /// The variables with multiplicity, sorted in the variable order.
    pub fn sorted_letters(&self) -> Vec<Variable> {
        self.0
            .iter()
            .flat_map(|(&v, &e)| std::iter::repeat(v).take(e as usize))
            .collect()
    }

    /// The same exponent sequence on `x1, x2, ...`, with the order-preserving
    /// relabelling that maps `self` onto it. Such a relabelling preserves the
    /// word order, so components related by it have index-aligned bases.
    pub fn canonical(&self) -> (MultiDegree, BTreeMap<Variable, Variable>) {
        let mut d = MultiDegree::zero();
        let mut relabel = BTreeMap::new();
        for (i, (&v, &e)) in self.0.iter().enumerate() {
            let target = Variable::x(i as u32 + 1);
            d.add_var(target, e);
            relabel.insert(v, target);
        }
        (d, relabel)
    }

    /// Filesystem-safe key, e.g. `x1-x2-y1e2`.
    pub fn key(&self) -> String {
        if self.0.is_empty() {
            return "one".to_string();
        }
        self.0
            .iter()
            .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}e{e}") })
            .collect::<Vec<_>>()
            .join("-")
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        let mut out = self.clone();
        for (v, e) in rhs.iter() {
            out.add_var(v, e);
        }
        out
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}:{e}")?;
        }
        f.write_str("}")
    }
}

/// Accepts `x1,x2^2,y1` (comma separated variables with optional exponent),
/// `{x1:1,x2:2}` (the display form), or `1` for the constants.
impl FromStr for MultiDegree {
    type Err = MultiDegreeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| MultiDegreeParseError {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let body = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        let mut d = MultiDegree::zero();
        if body.is_empty() || body == "1" {
            return Ok(d);
        }
        for item in body.split(',') {
            let item = item.trim();
            let (name, exp) = match item.split_once(|c| c == '^' || c == ':') {
                Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| err("bad exponent"))?),
                None => (item, 1),
            };
            let mut chars = name.chars();
            let family = chars
                .next()
                .and_then(Family::from_char)
                .ok_or_else(|| err("unknown variable family"))?;
            let index: u32 = chars.as_str().parse().map_err(|_| err("bad variable index"))?;
            if index == 0 {
                return Err(err("variable indices start at 1"));
            }
            d.add_var(Variable::new(family, index), exp);
        }
        Ok(d)
    }
}

/// An element of the free ring: a finite map from words to nonzero integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Polynomial {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn var(v: Variable) -> Polynomial {
        Polynomial::monomial(Monomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Polynomial {
        Polynomial::term(m, BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Restriction to the monomials of multidegree `d`.
    pub fn component(&self, d: &MultiDegree) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &m.multidegree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Split into multihomogeneous components, keyed by multidegree.
    pub fn components(&self) -> BTreeMap<MultiDegree, Polynomial> {
        let mut out: BTreeMap<MultiDegree, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.multidegree())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// The common multidegree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(Monomial::multidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Substitutes variables for variables; `f` must be injective on the
    /// variables that occur.
    pub fn rename(&self, f: impl Fn(Variable) -> Variable) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::from_vars(m.vars().iter().map(|&v| f(v)).collect()), c.clone()))
                .collect(),
        }
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::len).max()
    }
}

/// `pq - qp`.
pub fn commutator(p: &Polynomial, q: &Polynomial) -> Polynomial {
    &(p * q) - &(q * p)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("a left-normed commutator needs at least one argument")]
pub struct EmptyCommutator;

/// `[a1, ..., ak] = [[a1, ..., a(k-1)], ak]`; a single argument is returned as is.
pub fn left_normed(args: &[Polynomial]) -> Result<Polynomial, EmptyCommutator> {
    let (first, rest) = args.split_first().ok_or(EmptyCommutator)?;
    Ok(rest.iter().fold(first.clone(), |acc, a| commutator(&acc, a)))
}

/// Left-normed commutator of single variables.
pub fn left_normed_vars(vars: &[Variable]) -> Polynomial {
    let args: Vec<Polynomial> = vars.iter().map(|&v| Polynomial::var(v)).collect();
    left_normed(&args).expect("non-empty variable list")
}

/// `[x_from, ..., x_(from+len-1)]` style commutator in one family.
pub fn commutator_run(family: Family, from: u32, len: u32) -> Polynomial {
    let vars: Vec<Variable> = (from..from + len).map(|i| Variable::new(family, i)).collect();
    left_normed_vars(&vars)
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Polynomial {
        Polynomial::constant(BigInt::from(c))
    }
}

impl From<Variable> for Polynomial {
    fn from(v: Variable) -> Polynomial {
        Polynomial::var(v)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.concat(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Mul<&Polynomial> for i64 {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        rhs.scale(&BigInt::from(self))
    }
}

impl Mul<Polynomial> for i64 {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        rhs.scale(&BigInt::from(self))
    }
}

/// Canonical form: terms in monomial order, explicit signs, `*` for products.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}
