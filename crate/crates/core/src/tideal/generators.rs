use serde::Serialize;

use crate::basis::ComponentBasis;
use crate::freering::{left_normed, Monomial, MultiDegree, Polynomial, Variable};
use crate::intlattice::SparseRow;

/// `[args[0], ..., args[k-1]] * right_cofactor`, all entries monomials.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorSpec {
    pub args: Vec<Monomial>,
    pub right_cofactor: Monomial,
}

impl GeneratorSpec {
    pub fn k(&self) -> usize {
        self.args.len()
    }

    pub fn multidegree(&self) -> MultiDegree {
        self.args
            .iter()
            .fold(self.right_cofactor.multidegree(), |acc, a| &acc + &a.multidegree())
    }

    /// The denoted element, built with ring arithmetic.
    pub fn polynomial(&self) -> Polynomial {
        let args: Vec<Polynomial> = self.args.iter().cloned().map(Polynomial::monomial).collect();
        let c = left_normed(&args).expect("k >= 1");
        &c * &Polynomial::monomial(self.right_cofactor.clone())
    }

    /// Signed words of the expansion. `[c, a] = ca - ac` doubles the word
    /// list per argument; no cancellation is attempted here.
    pub fn expand(&self) -> Vec<(Vec<Variable>, bool)> {
        let mut terms: Vec<(Vec<Variable>, bool)> = vec![(self.args[0].vars().to_vec(), true)];
        for a in &self.args[1..] {
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (w, positive) in terms {
                let mut right = w.clone();
                right.extend_from_slice(a.vars());
                let mut left = a.vars().to_vec();
                left.extend_from_slice(&w);
                next.push((right, positive));
                next.push((left, !positive));
            }
            terms = next;
        }
        for (w, _) in &mut terms {
            w.extend_from_slice(self.right_cofactor.vars());
        }
        terms
    }

    /// Coordinates in `basis`, which must have this generator's multidegree.
    pub fn row(&self, basis: &ComponentBasis) -> SparseRow {
        SparseRow::from_pairs(self.expand().into_iter().map(|(w, positive)| {
            let col = basis
                .index_of(&Monomial::from_vars(w))
                .expect("generator word outside its component") as u32;
            (col, if positive { 1.into() } else { (-1).into() })
        }))
    }

    pub fn describe(&self) -> GeneratorDescription {
        GeneratorDescription {
            args: self.args.iter().map(ToString::to_string).collect(),
            right_cofactor: self.right_cofactor.to_string(),
        }
    }
}

impl std::fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")?;
        if !self.right_cofactor.is_one() {
            write!(f, "*{}", self.right_cofactor)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorDescription {
    pub args: Vec<String>,
    pub right_cofactor: String,
}

/// Spanning set of `T(k)` in the component of `basis`.
///
/// Left cofactors are unnecessary: `u*c = c*u - [c, u]`, and `[c, u]` is
/// again a length-`k` commutator once its first two entries are merged.
/// Arguments range over nonconstant monomials, which suffices by
/// multilinearity. Specs with equal first two arguments vanish and are
/// dropped; of each pair related by swapping the first two arguments only
/// the one with the smaller first argument is kept, the other being its
/// negative. For `k = 1` the ideal is the whole ring and the generators are
/// the basis words themselves.
pub fn enumerate_generators(k: usize, basis: &ComponentBasis) -> Vec<GeneratorSpec> {
    assert!(k >= 1, "commutator length must be positive");
    if k == 1 {
        return basis
            .monomials()
            .iter()
            .map(|m| GeneratorSpec {
                args: vec![m.clone()],
                right_cofactor: Monomial::one(),
            })
            .collect();
    }
    let n = basis.degree().total() as usize;
    if n < k {
        return Vec::new();
    }
    let splits = compositions(n, k);
    let mut out = Vec::new();
    for word in basis.monomials() {
        let letters = word.vars();
        for cuts in &splits {
            // cuts[i]..cuts[i+1] is argument i; the tail is the cofactor.
            let first = &letters[cuts[0]..cuts[1]];
            let second = &letters[cuts[1]..cuts[2]];
            let (a, b) = (Monomial::from_vars(first.to_vec()), Monomial::from_vars(second.to_vec()));
            if a >= b {
                continue;
            }
            let mut args = Vec::with_capacity(k);
            args.push(a);
            args.push(b);
            for w in cuts[2..].windows(2) {
                args.push(Monomial::from_vars(letters[w[0]..w[1]].to_vec()));
            }
            out.push(GeneratorSpec {
                args,
                right_cofactor: Monomial::from_vars(letters[cuts[k]..].to_vec()),
            });
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Cut positions `0 = c0 < c1 < ... < ck <= n` (k nonempty arguments and a
/// possibly empty tail), in lexicographic order.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().unwrap();
        let remaining = k + 1 - cur.len();
        for c in last + 1..=n - (remaining - 1) {
            cur.push(c);
            go(n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut vec![0], &mut out);
    out
}

/// Generator count for a multilinear component of degree `n`, by formula:
/// `n!/2` words-with-swap-classes times the number of cut patterns.
pub fn multilinear_generator_count(n: usize, k: usize) -> usize {
    if n < k {
        return 0;
    }
    let fact: usize = (1..=n).product();
    if k == 1 {
        return fact;
    }
    let binom = |a: usize, b: usize| -> usize {
        if b > a {
            return 0;
        }
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    };
    let patterns: usize = (0..=n - k).map(|tail| binom(n - tail - 1, k - 1)).sum();
    fact / 2 * patterns
}
