//! The twelve acceptance criteria, run in order with one pass/fail line
//! each. Criterion 12 (degree-7 slow tier) runs unless `TIDEAL_SKIP_SLOW=1`.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tideal::experiments::{
    check_cor23, check_cor24, check_corollary13, check_lemma22, check_lemma25, conjecture_scan, permutations4,
    replay_identities, Lab, ProductSpec, SuiteReport, Verdict,
};
use tideal::freering::{commutator_run, Family, MultiDegree, Polynomial};
use tideal::intlattice::{order_mod_lattice, Order};
use tideal::tideal::{order_in_quotient, quotient_torsion, t_membership, LatticeStore, MembershipReport, QueryOptions};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
}

fn product(m: u32, n: u32) -> Polynomial {
    &commutator_run(Family::X, 1, m) * &commutator_run(Family::Y, 1, n)
}

fn opts() -> QueryOptions {
    QueryOptions {
        include_certificates: true,
        ..QueryOptions::default()
    }
}

/// Membership with every component's certificate recombined through ring
/// arithmetic on the generators it names.
fn certified(store: &LatticeStore, p: &Polynomial, k: usize) -> Result<MembershipReport, String> {
    let report = t_membership(store, p, k, &opts()).map_err(|e| e.to_string())?;
    if !report.member {
        return Err(format!("{p} is not in T({k})"));
    }
    for (d, part) in p.components() {
        let (canonical, relabel) = d.canonical();
        let lattice = store.lattice(k, &canonical).map_err(|e| e.to_string())?;
        let verdict = report
            .components
            .iter()
            .find(|c| c.multidegree == d.to_string())
            .ok_or("component missing from report")?;
        let cert = verdict.certificate.as_ref().ok_or("certificate missing")?;
        let mut sum = Polynomial::zero();
        for (i, c) in &cert.coefficients {
            sum += &lattice.generators()[*i].polynomial().scale(c);
        }
        if sum != part.rename(|v| relabel[&v]) {
            return Err(format!("certificate for {d} does not recombine"));
        }
    }
    Ok(report)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

fn suite_ok(report: &SuiteReport) -> Result<(), String> {
    match report.claims.iter().find(|c| c.verdict == Verdict::Fail) {
        Some(c) => Err(format!("{}: {}", c.claim_id, c.detail)),
        None => Ok(()),
    }
}

fn c1_identities(store: &LatticeStore) -> Outcome {
    let r = replay_identities(&Lab::new(store));
    suite_ok(&r)?;
    Ok(format!("{} identities", r.claims.len()))
}

fn c2_theorem(store: &LatticeStore, out: &mut Vec<String>) -> Outcome {
    let mut count = 0;
    for m in 1..=5u32 {
        for n in 1..=6 - m {
            if m % 2 == 0 && n % 2 == 0 {
                continue;
            }
            let target = product(m, n).scale(&BigInt::from(3));
            out.push(json(&certified(store, &target, (m + n - 1) as usize)?));
            count += 1;
        }
    }
    Ok(format!("{count} products certified"))
}

fn c3_sharpness(store: &LatticeStore, out: &mut Vec<String>) -> Outcome {
    let base = product(3, 2);
    for l in [1, 2] {
        let r = t_membership(store, &base.scale(&BigInt::from(l)), 4, &opts()).map_err(|e| e.to_string())?;
        if r.member {
            return Err(format!("{l} times the product is already a member"));
        }
        out.push(json(&r));
    }
    out.push(json(&certified(store, &base.scale(&BigInt::from(3)), 4)?));
    let order = order_in_quotient(store, &base, 4).map_err(|e| e.to_string())?;
    if order != Order::finite(3) {
        return Err(format!("order {order}"));
    }
    Ok("order 3".into())
}

fn c4_exception(store: &LatticeStore, out: &mut Vec<String>) -> Outcome {
    out.push(json(&certified(store, &product(3, 3), 5)?));
    Ok("coefficient 1".into())
}

fn c5_even_even(store: &LatticeStore, out: &mut Vec<String>) -> Outcome {
    let target = product(2, 2);
    let d = target.homogeneous_degree().unwrap();
    let (canonical, relabel) = d.canonical();
    let lattice = store.lattice(3, &canonical).map_err(|e| e.to_string())?;
    let v = lattice.vectorize(&target.rename(|x| relabel[&x])).map_err(|e| e.to_string())?;
    let smith = order_mod_lattice(&lattice.matrix(), &v).map_err(|e| e.to_string())?;
    let query = order_in_quotient(store, &target, 3).map_err(|e| e.to_string())?;
    out.push(json(&smith));
    if smith != Order::Infinite || query != Order::Infinite {
        return Err(format!("smith {smith}, query {query}"));
    }
    Ok("infinite".into())
}

fn c6_baseline(store: &LatticeStore, out: &mut Vec<String>) -> Outcome {
    let mut count = 0;
    for m in 2..=4u32 {
        for n in 2..=6 - m {
            out.push(json(&certified(store, &product(m, n), (m + n - 2) as usize)?));
            count += 1;
        }
    }
    Ok(format!("{count} products certified"))
}

fn c7_lemmas(store: &LatticeStore, out: &mut Vec<String>) -> Outcome {
    let lab = Lab::new(store);
    let cor23 = check_cor23(&lab, 2, &permutations4());
    if cor23.claims.len() < 24 {
        return Err("fewer than 24 permutations".into());
    }
    let mut reports = vec![check_lemma22(&lab, 2), cor23];
    reports.extend((2..=4).map(|k| check_cor24(&lab, k)));
    reports.extend([check_lemma25(&lab, 2), check_lemma25(&lab, 3)]);
    let mut claims = 0;
    for r in &reports {
        suite_ok(r)?;
        claims += r.claims.iter().filter(|c| c.verdict == Verdict::Pass).count();
        out.push(r.to_json());
    }
    Ok(format!("{claims} claims certified"))
}

fn c8_torsion(store: &LatticeStore, out: &mut Vec<String>) -> Outcome {
    for n in 3..=5 {
        let q = quotient_torsion(store, 3, &MultiDegree::multilinear_x(n)).map_err(|e| e.to_string())?;
        out.push(json(&q));
        if !q.torsion.is_empty() {
            return Err(format!("T(3) torsion at degree {n}"));
        }
    }
    let q = quotient_torsion(store, 4, &MultiDegree::multilinear_x(5)).map_err(|e| e.to_string())?;
    out.push(json(&q));
    if q.torsion.is_empty() || q.torsion.iter().any(|d| *d != BigInt::from(3)) {
        return Err(format!("T(4) torsion {:?}", q.torsion));
    }
    Ok(format!("T(4) degree 5 torsion (Z/3)^{}", q.torsion.len()))
}

fn c9_oracle() -> Outcome {
    let n = common::oracle_equivalence(0xacce, 250)?;
    Ok(format!("{n} random matrices"))
}

fn c10_spanning(store: &LatticeStore) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let lattices = store.resident_lattices();
    let mut checked = 0;
    let mut products = 0;
    for l in &lattices {
        let d = l.degree().clone();
        if (d.total() as usize) < l.k() {
            continue;
        }
        for _ in 0..50 {
            let p = common::random_two_sided_product(&mut rng, l.k(), &d);
            let v = l.coordinates(&p).map_err(|e| e.to_string())?;
            if !l.contains_vector(&v) {
                return Err(format!("{p} not in T({}) at {d}", l.k()));
            }
            products += 1;
        }
        checked += 1;
    }
    if checked == 0 {
        return Err("no lattices".into());
    }
    Ok(format!("{products} products over {checked} of {} lattices", lattices.len()))
}

/// Criteria 2 to 8 on a fresh store; returns their JSON output.
fn middle(store: &LatticeStore, results: &mut Vec<(u32, Outcome, Duration)>) -> Vec<String> {
    let mut out = Vec::new();
    let steps: [(u32, fn(&LatticeStore, &mut Vec<String>) -> Outcome); 7] = [
        (2, c2_theorem),
        (3, c3_sharpness),
        (4, c4_exception),
        (5, c5_even_even),
        (6, c6_baseline),
        (7, c7_lemmas),
        (8, c8_torsion),
    ];
    for (id, f) in steps {
        let start = Instant::now();
        let r = f(store, &mut out);
        results.push((id, r, start.elapsed()));
    }
    out
}

fn c12_slow(store: &LatticeStore) -> Outcome {
    let lab = Lab {
        slow: true,
        ..Lab::new(store)
    };
    let spec = ProductSpec::new(&[2, 2, 3]).unwrap();
    let cor = check_corollary13(&lab, &spec);
    suite_ok(&cor)?;
    let scan = conjecture_scan(&lab, 7);
    suite_ok(&scan)?;
    let seventh = scan
        .claims
        .iter()
        .filter(|c| {
            let pair = c.claim_id.split('/').nth(1).unwrap_or("");
            let (m, n) = pair.split_once('x').unwrap_or(("0", "0"));
            m.parse::<u32>().unwrap_or(0) + n.parse::<u32>().unwrap_or(0) == 7
        })
        .count();
    if seventh == 0 {
        return Err("scan did not reach degree 7".into());
    }
    Ok(format!("(2,2,3) in T({}), scan {} claims ({seventh} at degree 7)", spec.n, scan.claims.len()))
}

/// Written past the test harness's capture so the lines always show.
fn report(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { id: 1, name: "identity replay", budget: Some(Duration::from_secs(1)) },
        Criterion { id: 2, name: "odd-length products times 3", budget: Some(Duration::from_secs(120)) },
        Criterion { id: 3, name: "sharpness at (3,2)", budget: Some(Duration::from_secs(30)) },
        Criterion { id: 4, name: "(3,3) exception", budget: Some(Duration::from_secs(120)) },
        Criterion { id: 5, name: "even-even infinite order", budget: Some(Duration::from_secs(5)) },
        Criterion { id: 6, name: "baseline inclusion", budget: Some(Duration::from_secs(120)) },
        Criterion { id: 7, name: "lemmas and corollaries", budget: Some(Duration::from_secs(600)) },
        Criterion { id: 8, name: "quotient torsion", budget: Some(Duration::from_secs(300)) },
        Criterion { id: 9, name: "oracle equivalence", budget: None },
        Criterion { id: 10, name: "two-sided products", budget: None },
        Criterion { id: 11, name: "determinism", budget: None },
        Criterion { id: 12, name: "degree-7 slow tier", budget: Some(Duration::from_secs(3600)) },
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut results: Vec<(u32, Outcome, Duration)> = Vec::new();

    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let cold_store = LatticeStore::with_cache_dir(8, dir.path());
    let cold = one.install(|| {
        let start = Instant::now();
        let r = c1_identities(&cold_store);
        results.push((1, r, start.elapsed()));
        middle(&cold_store, &mut results)
    });

    let start = Instant::now();
    results.push((9, c9_oracle(), start.elapsed()));
    let start = Instant::now();
    results.push((10, c10_spanning(&cold_store), start.elapsed()));

    let start = Instant::now();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let warm_store = LatticeStore::with_cache_dir(8, dir.path());
    let mut scratch = Vec::new();
    let warm = many.install(|| middle(&warm_store, &mut scratch));
    let verdict = if scratch.iter().any(|(_, r, _)| r.is_err()) {
        Err("warm run failed".to_string())
    } else if cold != warm {
        let at = cold.iter().zip(&warm).position(|(a, b)| a != b).unwrap_or(cold.len().min(warm.len()));
        Err(format!("report {at} differs between runs"))
    } else {
        Ok(format!("{} reports identical, cold 1 worker vs warm 4 workers", cold.len()))
    };
    results.push((11, verdict, start.elapsed()));

    if std::env::var("TIDEAL_SKIP_SLOW").map_or(true, |v| v != "1") {
        let start = Instant::now();
        results.push((12, c12_slow(&warm_store), start.elapsed()));
    }

    let mut failed = Vec::new();
    for c in &criteria {
        let Some((_, outcome, took)) = results.iter().find(|(id, _, _)| *id == c.id) else {
            report(&format!("skip {:>2} {:<30} TIDEAL_SKIP_SLOW=1", c.id, c.name));
            continue;
        };
        let over = c.budget.is_some_and(|b| *took > b);
        let (ok, detail) = match outcome {
            Ok(d) if !over => (true, d.clone()),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e.clone()),
        };
        let budget = c.budget.map_or("-".to_string(), |b| format!("{}s", b.as_secs()));
        report(&format!(
            "{} {:>2} {:<30} {:>9.3}s (budget {budget}) {detail}",
            if ok { "pass" } else { "FAIL" },
            c.id,
            c.name,
            took.as_secs_f64()
        ));
        if !ok {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
