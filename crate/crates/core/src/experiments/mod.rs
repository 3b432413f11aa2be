//! Verification suites over concrete instances of the commutator identities
//! and ideal memberships, with fresh variables standing for the universally
//! quantified ring elements.

mod suites;

use std::time::Instant;

use serde::Serialize;

use crate::freering::{MultiDegree, Polynomial};
use crate::intlattice::{Order, QuotientStructure};
use crate::tideal::{quotient_torsion, t_membership, LatticeStore, QueryOptions};

pub use suites::{
    check_cor23, check_cor24, check_corollary13, check_lemma22, check_lemma25, conjecture_scan, latyshev_baseline,
    permutations4, replay_identities, run_suite, theorem_sweep, torsion_scan, Suite,
};

/// A product of left-normed commutators of lengths `n_list`, in disjoint
/// variables, with the power of 3 and ideal index predicted for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductSpec {
    pub n_list: Vec<u32>,
    /// Number of odd lengths.
    pub ell: u32,
    pub q: u32,
    pub n: u32,
}

impl ProductSpec {
    /// `None` if the list is empty or has a zero length.
    pub fn new(n_list: &[u32]) -> Option<ProductSpec> {
        if n_list.is_empty() || n_list.contains(&0) {
            return None;
        }
        let k = n_list.len() as u32;
        let ell = n_list.iter().filter(|&&n| n % 2 == 1).count() as u32;
        let q = if ell < k { ell } else { ell - 1 };
        let n = n_list.iter().sum::<u32>() + q - 2 * (k - 1);
        Some(ProductSpec {
            n_list: n_list.to_vec(),
            ell,
            q,
            n,
        })
    }

    /// Commutators in consecutive x-variables: `[x1..x(n1)][x(n1+1)..]...`.
    pub fn product(&self) -> Polynomial {
        let mut next = 1;
        let mut p = Polynomial::one();
        for &len in &self.n_list {
            p = &p * &crate::freering::commutator_run(crate::freering::Family::X, next, len);
            next += len;
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported only; never affects the suite result.
    Evidence,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Evidence => "evidence",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim_id: String,
    /// The statement being checked, in words and formulas.
    pub anchor: String,
    pub verdict: Verdict,
    pub order: Option<Order>,
    pub certificate_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// True iff no claim failed.
    pub passed: bool,
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    pub fn new(suite: &str, claims: Vec<Claim>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            passed: claims.iter().all(|c| c.verdict != Verdict::Fail),
            claims,
        }
    }

    pub fn merge(suite: &str, reports: Vec<SuiteReport>) -> SuiteReport {
        SuiteReport::new(suite, reports.into_iter().flat_map(|r| r.claims).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Columns: claim_id, anchor, verdict, order, certificate_digest,
    /// millis, detail.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["claim_id", "anchor", "verdict", "order", "certificate_digest", "millis", "detail"])
            .expect("in-memory write");
        for c in &self.claims {
            w.write_record([
                c.claim_id.clone(),
                c.anchor.clone(),
                c.verdict.to_string(),
                c.order.as_ref().map(ToString::to_string).unwrap_or_default(),
                c.certificate_digest.clone().unwrap_or_default(),
                c.millis.map(|m| m.to_string()).unwrap_or_default(),
                c.detail.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let order = c.order.as_ref().map(|o| format!(" order={o}")).unwrap_or_default();
            out.push_str(&format!("{:<8} {}{}  {}\n", c.verdict.to_string(), c.claim_id, order, c.detail));
        }
        let failed = self.claims.iter().filter(|c| c.verdict == Verdict::Fail).count();
        out.push_str(&format!(
            "{}: {} claims, {} failed\n",
            self.suite,
            self.claims.len(),
            failed
        ));
        out
    }
}

/// Context shared by the suites.
pub struct Lab<'a> {
    pub store: &'a LatticeStore,
    /// Record per-claim wall-clock times (off for reproducible reports).
    pub timing: bool,
    /// Include the degree-7 instances.
    pub slow: bool,
}

impl<'a> Lab<'a> {
    pub fn new(store: &'a LatticeStore) -> Lab<'a> {
        Lab {
            store,
            timing: false,
            slow: false,
        }
    }

    fn claim(&self, id: &str, anchor: &str, start: Instant) -> Claim {
        Claim {
            claim_id: id.to_string(),
            anchor: anchor.to_string(),
            verdict: Verdict::Fail,
            order: None,
            certificate_digest: None,
            millis: self.timing.then(|| start.elapsed().as_millis() as u64),
            detail: String::new(),
        }
    }

    fn finish(&self, mut c: Claim, start: Instant) -> Claim {
        c.millis = self.timing.then(|| start.elapsed().as_millis() as u64);
        c
    }

    pub fn identity(&self, id: &str, anchor: &str, lhs: &Polynomial, rhs: &Polynomial) -> Claim {
        let start = Instant::now();
        let mut c = self.claim(id, anchor, start);
        let diff = lhs - rhs;
        if diff.is_zero() {
            c.verdict = Verdict::Pass;
            c.detail = format!("identity holds ({} terms)", lhs.len());
        } else {
            c.detail = format!("difference has {} terms", diff.len());
        }
        self.finish(c, start)
    }

    /// Membership of `p` in `T(k)`, with the verdict decided by `judge`
    /// from (member, order).
    fn membership(
        &self,
        id: &str,
        anchor: &str,
        p: &Polynomial,
        k: usize,
        judge: impl Fn(bool, &Order) -> Verdict,
    ) -> Claim {
        let start = Instant::now();
        let mut c = self.claim(id, anchor, start);
        if p.is_zero() {
            c.verdict = judge(true, &Order::one());
            c.order = Some(Order::one());
            c.detail = format!("element is zero, trivially in T({k})");
            return self.finish(c, start);
        }
        match t_membership(self.store, p, k, &QueryOptions::default()) {
            Ok(r) => {
                let order = r.order.clone().expect("no prescreen in suites");
                c.verdict = judge(r.member, &order);
                c.detail = format!(
                    "{} T({k}) at {}",
                    if r.member { "member of" } else { "not in" },
                    r.components.iter().map(|v| v.multidegree.as_str()).collect::<Vec<_>>().join(" + ")
                );
                c.certificate_digest = combined_digest(r.components.iter().filter_map(|v| v.certificate_digest.as_deref()));
                c.order = Some(order);
            }
            Err(e) => c.detail = format!("error: {e}"),
        }
        self.finish(c, start)
    }

    pub fn member(&self, id: &str, anchor: &str, p: &Polynomial, k: usize) -> Claim {
        self.membership(id, anchor, p, k, |m, _| if m { Verdict::Pass } else { Verdict::Fail })
    }

    pub fn not_member(&self, id: &str, anchor: &str, p: &Polynomial, k: usize) -> Claim {
        self.membership(id, anchor, p, k, |m, _| if m { Verdict::Fail } else { Verdict::Pass })
    }

    pub fn order_is(&self, id: &str, anchor: &str, p: &Polynomial, k: usize, expected: Order) -> Claim {
        self.membership(id, anchor, p, k, |_, o| if *o == expected { Verdict::Pass } else { Verdict::Fail })
    }

    pub fn order_divides(&self, id: &str, anchor: &str, p: &Polynomial, k: usize, n: u64) -> Claim {
        self.membership(id, anchor, p, k, |_, o| if o.divides(n) { Verdict::Pass } else { Verdict::Fail })
    }

    pub fn order_evidence(&self, id: &str, anchor: &str, p: &Polynomial, k: usize) -> Claim {
        self.membership(id, anchor, p, k, |_, _| Verdict::Evidence)
    }

    /// Quotient structure of one component; `check` is `None` for evidence.
    pub fn torsion(
        &self,
        id: &str,
        anchor: &str,
        k: usize,
        d: &MultiDegree,
        check: Option<&dyn Fn(&QuotientStructure) -> bool>,
    ) -> Claim {
        let start = Instant::now();
        let mut c = self.claim(id, anchor, start);
        match quotient_torsion(self.store, k, d) {
            Ok(q) => {
                c.verdict = match check {
                    None => Verdict::Evidence,
                    Some(f) if f(&q) => Verdict::Pass,
                    Some(_) => Verdict::Fail,
                };
                c.detail = format!("T({k}) at {d}: {}", describe_quotient(&q));
            }
            Err(e) => c.detail = format!("error: {e}"),
        }
        self.finish(c, start)
    }
}

fn combined_digest<'a>(digests: impl Iterator<Item = &'a str>) -> Option<String> {
    let all: Vec<&str> = digests.collect();
    match all.as_slice() {
        [] => None,
        [one] => Some(one.to_string()),
        many => {
            use sha2::{Digest, Sha256};
            Some(hex::encode(Sha256::digest(many.join(";").as_bytes())))
        }
    }
}

/// `free rank 46, torsion Z/3` style summary.
pub fn describe_quotient(q: &QuotientStructure) -> String {
    if q.torsion.is_empty() {
        return format!("free rank {}, no torsion", q.free_rank);
    }
    let mut groups: Vec<(String, usize)> = Vec::new();
    for d in &q.torsion {
        let d = d.to_string();
        match groups.last_mut() {
            Some((last, n)) if *last == d => *n += 1,
            _ => groups.push((d, 1)),
        }
    }
    let parts: Vec<String> = groups
        .into_iter()
        .map(|(d, n)| if n == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{n}") })
        .collect();
    format!("free rank {}, torsion {}", q.free_rank, parts.join(" + "))
}
