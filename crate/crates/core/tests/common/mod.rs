//! Reference computations written independently of the library's
//! elimination code: determinants by Bareiss, lattice membership and
//! element orders through gcds of maximal minors, ranks modulo primes, and
//! bounded brute-force search.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tideal::basis::IntVector;
use tideal::intlattice::{
    lattice_member, verify_certificate, verify_sparse_certificate, EchelonBasis, IntMatrix, MembershipCertificate,
    Reduction, SparseRow,
};

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

/// Determinant of a square matrix, fraction-free.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// gcd of all r x r minors; zero if there are none that are nonzero.
pub fn minor_gcd(m: &[Vec<BigInt>], r: usize) -> BigInt {
    if r == 0 {
        return BigInt::one();
    }
    let cols = m.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in subsets(m.len(), r) {
        for cs in subsets(cols, r) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
            g = g.gcd(&det(sub));
        }
    }
    g
}

/// Rank over the rationals: the largest r with a nonzero r x r minor.
pub fn rank_q(m: &[Vec<BigInt>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    (1..=m.len().min(cols)).rev().find(|&r| !minor_gcd(m, r).is_zero()).unwrap_or(0)
}

/// Order of `t` modulo the row lattice of `m`: `None` when infinite.
/// With `r` the rank, `t` has finite order iff appending it keeps the rank,
/// and then the order is the index of `L` in `L + Zt`, which is the ratio
/// of the gcds of maximal minors.
pub fn oracle_order(m: &[Vec<BigInt>], t: &[BigInt]) -> Option<BigInt> {
    let r = rank_q(m);
    let mut ext = m.to_vec();
    ext.push(t.to_vec());
    if rank_q(&ext) > r {
        return None;
    }
    Some(minor_gcd(m, r) / minor_gcd(&ext, r))
}

pub fn oracle_member(m: &[Vec<BigInt>], t: &[BigInt]) -> bool {
    oracle_order(m, t).map_or(false, |o| o.is_one())
}

/// Coefficients in `[-bound, bound]` with `c * m = t`, by exhaustive search.
pub fn brute_member(m: &[Vec<i64>], t: &[i64], bound: i64) -> Option<Vec<i64>> {
    let rows = m.len();
    let mut c = vec![-bound; rows];
    loop {
        let hit = (0..t.len()).all(|j| (0..rows).map(|i| c[i] * m[i][j]).sum::<i64>() == t[j]);
        if hit {
            return Some(c);
        }
        let mut i = 0;
        loop {
            if i == rows {
                return None;
            }
            if c[i] < bound {
                c[i] += 1;
                break;
            }
            c[i] = -bound;
            i += 1;
        }
    }
}

/// Smallest `l` in `1..=limit` with `l * t` found by bounded search.
pub fn brute_order(m: &[Vec<i64>], t: &[i64], limit: i64, bound: i64) -> Option<i64> {
    (1..=limit).find(|&l| {
        let lt: Vec<i64> = t.iter().map(|v| v * l).collect();
        brute_member(m, &lt, bound).is_some()
    })
}

/// Rank of integer rows modulo a prime, by plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<(usize, i64)>], columns: usize, p: i64) -> usize {
    let reduce = |v: i64| v.rem_euclid(p);
    let inv = |a: i64| {
        let (mut r, mut b, mut e) = (1i64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivot_rows: Vec<Option<Vec<i64>>> = vec![None; columns];
    let mut rank = 0;
    for row in rows {
        let mut v = vec![0i64; columns];
        for &(c, x) in row {
            v[c] = reduce(v[c] + x);
        }
        for c in 0..columns {
            if v[c] == 0 {
                continue;
            }
            match &pivot_rows[c] {
                Some(pr) => {
                    let f = v[c];
                    for j in c..columns {
                        if pr[j] != 0 {
                            v[j] = reduce(v[j] - f * pr[j]);
                        }
                    }
                }
                None => {
                    let s = inv(v[c]);
                    for x in v.iter_mut().skip(c) {
                        *x = *x * s % p;
                    }
                    pivot_rows[c] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect()).collect()
}

pub fn is_signed_one(v: &BigInt) -> bool {
    v.abs().is_one()
}

pub fn matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::new(cols, big(rows)).unwrap()
}

pub fn sparse_rows(rows: &[Vec<i64>]) -> Vec<SparseRow> {
    big(rows).iter().map(|r| SparseRow::from_dense(r)).collect()
}

/// Random integer matrices against exhaustive coefficient search and the
/// minor-gcd oracle. Returns the number of cases checked.
pub fn oracle_equivalence(seed: u64, cases: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let rows = rng.gen_range(1..=3);
        let cols = rng.gen_range(1..=5);
        let a = random_matrix(&mut rng, rows, cols, -4, 4);
        let c: Vec<i64> = (0..rows).map(|_| rng.gen_range(-3..=3)).collect();
        let mut t: Vec<i64> = (0..cols).map(|j| (0..rows).map(|i| c[i] * a[i][j]).sum()).collect();
        if rng.gen_bool(0.5) {
            let j = rng.gen_range(0..cols);
            t[j] += if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        let m = matrix(&a, cols);
        let tv = IntVector::from_i64(&t);
        let hnf_cert = lattice_member(&m, &tv).map_err(|e| e.to_string())?;
        let ech = EchelonBasis::from_rows(cols, &sparse_rows(&a));
        let ts = SparseRow::from_dense(tv.entries());
        let ech_member = ech.contains(&ts);
        let mut brute = brute_member(&a, &t, 12);
        if brute.is_none() {
            // Widen the search to the certificate's size before disagreeing.
            if let Some(cert) = &hnf_cert {
                let widest = cert.coefficients.values().map(|v| v.abs()).max().unwrap_or_default();
                let bound: i64 = widest.try_into().unwrap_or(i64::MAX);
                if bound <= 60 {
                    brute = brute_member(&a, &t, bound);
                }
            }
        }
        let exact = oracle_member(&big(&a), tv.entries());
        if hnf_cert.is_some() != brute.is_some() || ech_member != brute.is_some() || exact != brute.is_some() {
            return Err(format!("case {case}: {a:?} t={t:?}"));
        }
        if let Some(cert) = &hnf_cert {
            if !verify_certificate(&m, cert, &tv) {
                return Err(format!("case {case}: certificate does not recombine"));
            }
        }
        if ech_member {
            let Reduction::Member(rec) = ech.reduce(&ts) else {
                return Err(format!("case {case}: no echelon certificate"));
            };
            let cert = MembershipCertificate::from_sparse(&rec);
            if !verify_sparse_certificate(&sparse_rows(&a), &cert, &ts) {
                return Err(format!("case {case}: echelon certificate does not recombine"));
            }
        }
        if let Some(b) = brute {
            let cert = MembershipCertificate {
                coefficients: b.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (i, BigInt::from(*v))).collect(),
            };
            if !verify_certificate(&m, &cert, &tv) {
                return Err(format!("case {case}: search result does not recombine"));
            }
        }
    }
    Ok(cases)
}


/// Random homogeneous polynomial in exactly the letters of `word`: a few
/// rearrangements with nonzero coefficients.
fn random_arrangements<R: Rng>(rng: &mut R, word: &[tideal::freering::Variable]) -> tideal::freering::Polynomial {
    use rand::seq::SliceRandom;
    use tideal::freering::{Monomial, Polynomial};
    let mut p = Polynomial::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let mut w = word.to_vec();
        w.shuffle(rng);
        let c = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
        p.add_term(Monomial::from_vars(w), BigInt::from(c));
    }
    p
}

/// A random `u * [a1, ..., ak] * v` of multidegree `d`, where `u`, `v` and
/// the arguments are homogeneous polynomials and the arguments are
/// nonconstant. Requires `d.total() >= k`.
pub fn random_two_sided_product<R: Rng>(
    rng: &mut R,
    k: usize,
    d: &tideal::freering::MultiDegree,
) -> tideal::freering::Polynomial {
    use rand::seq::SliceRandom;
    use tideal::freering::{left_normed, Polynomial};
    let mut letters = Vec::new();
    for (v, e) in d.iter() {
        letters.extend(std::iter::repeat(v).take(e as usize));
    }
    letters.shuffle(rng);
    // Slot 0 is u, slots 1..=k the arguments, slot k+1 is v.
    let mut lengths = vec![0usize; k + 2];
    for l in &mut lengths[1..=k] {
        *l = 1;
    }
    for _ in 0..letters.len() - k {
        lengths[rng.gen_range(0..k + 2)] += 1;
    }
    let mut parts = Vec::new();
    let mut at = 0;
    for l in lengths {
        let seg = &letters[at..at + l];
        at += l;
        parts.push(if seg.is_empty() { Polynomial::one() } else { random_arrangements(rng, seg) });
    }
    let c = left_normed(&parts[1..=k]).expect("k >= 1");
    &(&parts[0] * &c) * &parts[k + 1]
}

/// Rank of the lattice's generator rows modulo `p`.
pub fn generator_rank_mod_p(lattice: &tideal::tideal::TComponentLattice, p: i64) -> usize {
    let rows: Vec<Vec<(usize, i64)>> = lattice
        .generator_rows()
        .iter()
        .map(|r| r.entries().iter().map(|(c, v)| (*c as usize, i64::try_from(v).unwrap())).collect())
        .collect();
    rank_mod_p(&rows, lattice.basis().len(), p)
}
