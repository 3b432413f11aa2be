mod common;

use common::*;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tideal::basis::enumerate_basis;
use tideal::experiments::ProductSpec;
use tideal::freering::{commutator_run, parse_expression, Family, MultiDegree, Polynomial};
use tideal::intlattice::{verify_certificate, IntMatrix, Order};
use tideal::tideal::{
    assemble_lattice, enumerate_generators, multilinear_generator_count, order_in_quotient, quotient_torsion,
    t_membership, LatticeStore, QueryOptions,
};

const BIG_PRIME: i64 = 2_147_483_647;

fn deg(s: &str) -> MultiDegree {
    s.parse().unwrap()
}

fn p(s: &str) -> Polynomial {
    parse_expression(s).unwrap()
}

#[test]
fn generator_counts_match_formula() {
    for n in 1..=6u32 {
        let basis = enumerate_basis(&MultiDegree::multilinear_x(n), 8).unwrap();
        for k in 1..=6 {
            assert_eq!(
                enumerate_generators(k, &basis).len(),
                multilinear_generator_count(n as usize, k),
                "n={n} k={k}"
            );
        }
    }
}

#[test]
fn small_generator_examples() {
    let b = enumerate_basis(&deg("x1,x2"), 8).unwrap();
    let gens = enumerate_generators(2, &b);
    assert_eq!(gens.len(), 1);
    assert_eq!(gens[0].polynomial(), p("[x1,x2]"));

    let b = enumerate_basis(&deg("x1^2"), 8).unwrap();
    assert!(enumerate_generators(2, &b).is_empty());

    let b = enumerate_basis(&MultiDegree::multilinear_x(5), 8).unwrap();
    for g in enumerate_generators(4, &b) {
        assert!(g.args.iter().filter(|a| a.len() == 2).count() <= 1, "{g}");
        assert!(g.args.iter().all(|a| a.len() <= 2), "{g}");
        assert_eq!(g.multidegree(), MultiDegree::multilinear_x(5));
    }
}

#[test]
fn generator_rows_expand_their_polynomials() {
    for (k, d) in [(2, "x1^2,x2"), (3, "x1,x2,x3,y1"), (4, "x1^2,x2,x3")] {
        let basis = enumerate_basis(&deg(d), 8).unwrap();
        for g in enumerate_generators(k, &basis) {
            let row = g.row(&basis);
            assert_eq!(basis.sparse_coordinates(&g.polynomial()).unwrap().len(), row.len());
            let dense = row.to_dense(basis.len());
            assert_eq!(basis.devectorize(&tideal::basis::IntVector(dense)).unwrap(), g.polynomial());
        }
    }
}

#[test]
fn small_lattice_examples() {
    let l = assemble_lattice(2, &deg("x1,x2"), 8).unwrap();
    let m = l.matrix();
    assert_eq!(m, IntMatrix::from_i64(2, &[&[1, -1]]));
    assert_eq!(l.quotient_structure().free_rank, 1);

    let l = assemble_lattice(3, &deg("x1,x2"), 8).unwrap();
    assert_eq!(l.matrix().nrows(), 0);
    assert_eq!(l.rank(), 0);
    assert_eq!(l.quotient_structure().free_rank, 2);

    let l = assemble_lattice(1, &deg("x1,x2"), 8).unwrap();
    assert_eq!(l.quotient_structure().free_rank, 0);
}

#[test]
fn two_sided_products_are_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (k, d) in [(2, "x1,x2,x3"), (3, "x1^2,x2,x3"), (3, "x1,x2,x3,x4"), (4, "x1,x2,x3,x4,x5"), (4, "x1^2,x2,x3,x4")] {
        let l = assemble_lattice(k, &deg(d), 8).unwrap();
        for _ in 0..60 {
            let prod = random_two_sided_product(&mut rng, k, &deg(d));
            let r = l.evaluate(&prod).unwrap();
            assert!(r.member, "{prod} not in T({k})");
            let cert = r.certificate.expect("member has a certificate");
            // Recombine through the ring, not the coordinate rows.
            let mut sum = Polynomial::zero();
            for (i, c) in &cert.coefficients {
                sum += &l.generators()[*i].polynomial().scale(c);
            }
            assert_eq!(sum, prod);
        }
    }
}

#[test]
fn higher_ideals_are_contained_in_lower() {
    for d in ["x1,x2,x3,x4", "x1^2,x2,x3", "x1,x2,x3,x4,x5"] {
        for k in 1..=4 {
            let lower = assemble_lattice(k, &deg(d), 8).unwrap();
            let upper = assemble_lattice(k + 1, &deg(d), 8).unwrap();
            for row in upper.generator_rows() {
                assert!(lower.contains_vector(row), "T({}) not inside T({k}) at {d}", k + 1);
            }
        }
    }
}

#[test]
fn non_members_are_rejected() {
    let store = LatticeStore::new(8);
    let opts = QueryOptions::default();
    assert!(!t_membership(&store, &p("x1*x2"), 2, &opts).unwrap().member);
    assert!(!t_membership(&store, &p("[x1,x2]"), 3, &opts).unwrap().member);
    assert!(t_membership(&store, &p("[x1,x2]*x3 + x3*[x1,x2]"), 2, &opts).unwrap().member);
    assert!(t_membership(&store, &p("[x1,x2,x3]*x4 + 2*x5*[x2,x3]"), 2, &opts).unwrap().member);
}

/// Quotient of a multilinear component; the modular-rank oracle confirms
/// the rational rank and how many invariants are divisible by 2, 3, 5, 7.
fn check_quotient(k: usize, n: u32, free: usize, threes: usize) {
    let d = MultiDegree::multilinear_x(n);
    let l = assemble_lattice(k, &d, 8).unwrap();
    let q = l.quotient_structure();
    assert_eq!(q.free_rank, free, "free rank k={k} n={n}");
    assert_eq!(q.torsion, vec![BigInt::from(3); threes], "torsion k={k} n={n}");
    let rank = generator_rank_mod_p(&l, BIG_PRIME);
    assert_eq!(rank, l.rank());
    assert_eq!(l.basis().len() - rank, free);
    assert_eq!(rank - generator_rank_mod_p(&l, 3), threes);
    for prime in [2, 5, 7] {
        assert_eq!(generator_rank_mod_p(&l, prime), rank, "torsion at {prime}");
    }
}

#[test]
fn frozen_quotients_of_t3() {
    for (n, free) in [(3, 4), (4, 8), (5, 16), (6, 32)] {
        check_quotient(3, n, free, 0);
    }
}

#[test]
fn frozen_quotients_of_t4() {
    check_quotient(4, 4, 18, 0);
    check_quotient(4, 5, 46, 1);
    check_quotient(4, 6, 102, 6);
}

#[test]
fn frozen_quotient_of_t5() {
    check_quotient(5, 6, 341, 0);
}

#[test]
fn order_three_product_certificate() {
    // [x1,x2][y1,y2,y3] has order 3 modulo T(4).
    let target = p("[x1,x2]*[y1,y2,y3]");
    let d = target.homogeneous_degree().unwrap();
    let l = assemble_lattice(4, &d, 8).unwrap();
    let r = l.evaluate(&target).unwrap();
    assert_eq!(r.order, Order::finite(3));
    assert!(!r.member);
    let triple = target.scale(&BigInt::from(3));
    let r3 = l.evaluate(&triple).unwrap();
    let cert = r3.certificate.expect("3 times the product is a member");
    let mut sum = Polynomial::zero();
    for (i, c) in &cert.coefficients {
        sum += &l.generators()[*i].polynomial().scale(c);
    }
    assert_eq!(sum, triple);
    assert!(verify_certificate(&l.matrix(), &cert, &l.vectorize(&triple).unwrap()));
}

/// Power of 3 and ideal index, straight from the definition.
fn predicted(n_list: &[u32]) -> (u32, u32) {
    let k = n_list.len() as u32;
    let odd = n_list.iter().filter(|n| *n % 2 == 1).count() as u32;
    let q = if odd == k { odd - 1 } else { odd };
    let total: u32 = n_list.iter().sum();
    (q, total + q - 2 * (k - 1))
}

fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn product_predictions_match_definition() {
    for total in 1..=8 {
        for list in compositions(total) {
            let spec = ProductSpec::new(&list).unwrap();
            assert_eq!((spec.q, spec.n), predicted(&list), "{list:?}");
        }
    }
    assert!(ProductSpec::new(&[]).is_none());
    assert!(ProductSpec::new(&[2, 0]).is_none());
}

#[test]
fn products_of_commutators_land_in_predicted_ideal() {
    let store = LatticeStore::new(8);
    let opts = QueryOptions::default();
    for total in 2..=6 {
        for list in compositions(total) {
            let spec = ProductSpec::new(&list).unwrap();
            let target = spec.product().scale(&BigInt::from(3u32.pow(spec.q)));
            if target.is_zero() {
                continue;
            }
            let report = t_membership(&store, &target, spec.n as usize, &opts).unwrap();
            assert!(report.member, "{list:?} not in T({})", spec.n);
        }
    }
}

#[test]
fn even_even_products_have_infinite_order() {
    let store = LatticeStore::new(8);
    for (m, n) in [(2, 2), (2, 4), (4, 2)] {
        let prod = &commutator_run(Family::X, 1, m) * &commutator_run(Family::Y, 1, n);
        let order = order_in_quotient(&store, &prod, (m + n - 1) as usize).unwrap();
        assert_eq!(order, Order::Infinite, "({m},{n})");
    }
}

#[test]
fn store_relabels_components() {
    let store = LatticeStore::new(8);
    let a = quotient_torsion(&store, 4, &deg("x1,x2,x3,x4,x5")).unwrap();
    let b = quotient_torsion(&store, 4, &deg("y1,y2,x7,z2,x3")).unwrap();
    assert_eq!(a, b);
    let r = t_membership(&store, &p("3*[y1,y2,y3]*[x4,x5]"), 4, &QueryOptions::default()).unwrap();
    assert!(r.member);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let store = LatticeStore::new(8);
            let opts = QueryOptions {
                include_certificates: true,
                ..QueryOptions::default()
            };
            let r = t_membership(&store, &p("3*[x1,x2,x3]*[y1,y2] + [x1,x2,y1,y2,x3]"), 4, &opts).unwrap();
            serde_json::to_string(&r).unwrap()
        })
    };
    assert_eq!(run(1), run(4));
}
