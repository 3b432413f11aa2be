use std::str::FromStr;

use super::{Lab, ProductSpec, SuiteReport};
use crate::freering::{MultiDegree, Polynomial};
use crate::intlattice::{Order, QuotientStructure};

fn p(text: &str) -> Polynomial {
    text.parse().expect("suite expression parses")
}

/// `[a1,...,an]` for n ≥ 2, the bare entry for n = 1.
fn bracket<S: AsRef<str>>(items: &[S]) -> String {
    let items: Vec<&str> = items.iter().map(AsRef::as_ref).collect();
    if items.len() == 1 {
        items[0].to_string()
    } else {
        format!("[{}]", items.join(","))
    }
}

fn vars(family: char, from: u32, len: u32) -> Vec<String> {
    (from..from + len).map(|i| format!("{family}{i}")).collect()
}

/// `[x1..xm][y1..yn]`.
fn xy_product(m: u32, n: u32) -> String {
    format!("{}*{}", bracket(&vars('x', 1, m)), bracket(&vars('y', 1, n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Lemma22,
    Cor23,
    Cor24,
    Lemma25,
    Corollary13,
    Theorem,
    Baseline,
    Torsion,
    Scan,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Lemma22 => "lemma22",
            Suite::Cor23 => "cor23",
            Suite::Cor24 => "cor24",
            Suite::Lemma25 => "lemma25",
            Suite::Corollary13 => "corollary13",
            Suite::Theorem => "theorem",
            Suite::Baseline => "baseline",
            Suite::Torsion => "torsion",
            Suite::Scan => "scan",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Suite as clap::ValueEnum>::from_str(s, false).map_err(|_| format!("unknown suite {s:?}"))
    }
}

pub fn run_suite(lab: &Lab, suite: Suite) -> SuiteReport {
    let all_sigmas = permutations4();
    match suite {
        Suite::Identities => replay_identities(lab),
        Suite::Lemma22 => SuiteReport::merge("lemma22", vec![check_lemma22(lab, 2), check_lemma22(lab, 3)]),
        Suite::Cor23 => SuiteReport::merge(
            "cor23",
            vec![check_cor23(lab, 2, &all_sigmas), check_cor23(lab, 3, &all_sigmas)],
        ),
        Suite::Cor24 => SuiteReport::merge("cor24", (2..=4).map(|k| check_cor24(lab, k)).collect()),
        Suite::Lemma25 => SuiteReport::merge("lemma25", vec![check_lemma25(lab, 2), check_lemma25(lab, 3)]),
        Suite::Corollary13 => {
            let mut lists: Vec<&[u32]> = vec![&[3, 2], &[3, 3]];
            if lab.slow {
                lists.push(&[2, 2, 3]);
            }
            let reports = lists
                .into_iter()
                .map(|l| check_corollary13(lab, &ProductSpec::new(l).expect("valid list")))
                .collect();
            SuiteReport::merge("corollary13", reports)
        }
        Suite::Theorem => theorem_sweep(lab, 6),
        Suite::Baseline => latyshev_baseline(lab, 6),
        Suite::Torsion => torsion_scan(lab),
        Suite::Scan => conjecture_scan(lab, if lab.slow { 7 } else { 6 }),
        Suite::All => {
            let parts = [
                Suite::Identities,
                Suite::Lemma22,
                Suite::Cor23,
                Suite::Cor24,
                Suite::Lemma25,
                Suite::Corollary13,
                Suite::Theorem,
                Suite::Baseline,
                Suite::Torsion,
                Suite::Scan,
            ];
            SuiteReport::merge("all", parts.iter().map(|&s| run_suite(lab, s)).collect())
        }
    }
}

/// Exact polynomial identities used in the derivations, in fresh variables.
pub fn replay_identities(lab: &Lab) -> SuiteReport {
    let checks: [(&str, &str, &str, &str); 12] = [
        (
            "identities/adjoint-leibniz",
            "[a1 a2, b] = a1[a2, b] + [a1, b]a2, so D_b(a) = [a, b] is a derivation",
            "[x1*x2,y1]",
            "x1*[x2,y1] + [x1,y1]*x2",
        ),
        (
            "identities/leibniz-length-3",
            "[a1 a2, b1, b2] = a1[a2, b1, b2] + [a1, b1][a2, b2] + [a1, b2][a2, b1] + [a1, b1, b2]a2",
            "[x1*x2,y1,y2]",
            "x1*[x2,y1,y2] + [x1,y1]*[x2,y2] + [x1,y2]*[x2,y1] + [x1,y1,y2]*x2",
        ),
        (
            "identities/leibniz-length-4",
            "[a1 a2, b1, b2, b3] expands into a1[a2, b1, b2, b3], six products of shorter commutators and [a1, b1, b2, b3]a2",
            "[x1*x2,y1,y2,y3]",
            "x1*[x2,y1,y2,y3] + [x1,y1]*[x2,y2,y3] + [x1,y2]*[x2,y1,y3] + [x1,y3]*[x2,y1,y2] \
             + [x1,y1,y2]*[x2,y3] + [x1,y1,y3]*[x2,y2] + [x1,y2,y3]*[x2,y1] + [x1,y1,y2,y3]*x2",
        ),
        (
            "identities/jacobi",
            "[a1, a2, a3] + [a2, a3, a1] + [a3, a1, a2] = 0",
            "[x1,x2,x3] + [x2,x3,x1] + [x3,x1,x2]",
            "0",
        ),
        (
            "identities/jacobi-rewrite-f4",
            "Jacobi rewrite [f2, f3, f4] = [f4, f3, f2] - [f4, f2, f3]",
            "[y2,y3,y4]",
            "[y4,y3,y2] - [y4,y2,y3]",
        ),
        (
            "identities/jacobi-rewrite-f1",
            "Jacobi rewrite [f2, f3, f1] = [f1, f3, f2] - [f1, f2, f3]",
            "[y2,y3,y1]",
            "[y1,y3,y2] - [y1,y2,y3]",
        ),
        (
            "identities/cu-v-w",
            "[cu, v, w] = c[u,v,w] + [c,v][u,w] + [c,w][u,v] + [c,v,w]u",
            "[z1*y1,y2,y3]",
            "z1*[y1,y2,y3] + [z1,y2]*[y1,y3] + [z1,y3]*[y1,y2] + [z1,y2,y3]*y1",
        ),
        (
            "identities/c1-v-w-c2",
            "[c1, v, w]c2 = [c1 c2, v, w] - ([c1, v][c2, w] + [c1, w][c2, v]) - c1[c2, v, w]",
            "[z1,y1,y2]*z2",
            "[z1*z2,y1,y2] - ([z1,y1]*[z2,y2] + [z1,y2]*[z2,y1]) - z1*[z2,y1,y2]",
        ),
        (
            "identities/pair-rearrangement",
            "[c,v][u,w] + [c,w][u,v] = [v,c][w,u] + [v,u][w,c] + [[c,w],[u,v]]",
            "[z1,y2]*[y1,y3] + [z1,y3]*[y1,y2]",
            "[y2,z1]*[y3,y1] + [y2,y1]*[y3,z1] + [[z1,y3],[y1,y2]]",
        ),
        (
            "identities/vw-c-u",
            "[v,c][w,u] + [v,u][w,c] = [vw, c, u] - v[w, c, u] - [v, c, u]w",
            "[y2,z1]*[y3,y1] + [y2,y1]*[y3,z1]",
            "[y2*y3,z1,y1] - y2*[y3,z1,y1] - [y2,z1,y1]*y3",
        ),
        (
            "identities/bracket-of-brackets",
            "[[c1, h2], [h1, h3]] = [c1, h2, h1, h3] - [c1, h2, h3, h1]",
            "[[z1,y2],[y1,y3]]",
            "[z1,y2,y1,y3] - [z1,y2,y3,y1]",
        ),
        (
            "identities/first-pair-antisymmetry",
            "[c1, h1 h2, h3] = -[h1 h2, c1, h3]",
            "[z1,y1*y2,y3]",
            "-[y1*y2,z1,y3]",
        ),
    ];
    let claims = checks
        .iter()
        .map(|(id, anchor, lhs, rhs)| lab.identity(id, anchor, &p(lhs), &p(rhs)))
        .collect();
    SuiteReport::new("identities", claims)
}

/// `g1..g(k-1)` as x-variables and `f1..f4` as y-variables.
fn g_list(k: u32) -> Vec<String> {
    vars('x', 1, k - 1)
}

fn gf(k: u32, f: &str) -> String {
    let mut items = g_list(k);
    items.push(f.to_string());
    bracket(&items)
}

/// Both sums of the two-commutator lemma in `T(k+2)`, and the congruence
/// `[c1,h1][h2,h3] + [c1,h2][h1,h3] ∈ T(k+2)` used to prove it.
pub fn check_lemma22(lab: &Lab, k: u32) -> SuiteReport {
    let t = k as usize + 2;
    let first = format!("{}*[y2,y3,y4] + {}*[y1,y3,y4]", gf(k, "y1"), gf(k, "y2"));
    let second = format!("{}*[y2,y3,y4] + {}*[y2,y3,y1]", gf(k, "y1"), gf(k, "y4"));
    let c1 = bracket(&vars('x', 1, k));
    let congruence = format!("[{c1},y1]*[y2,y3] + [{c1},y2]*[y1,y3]");
    let claims = vec![
        lab.member(
            &format!("lemma22/k{k}/swap-f1-f2"),
            "[g1..g(k-1), f1][f2, f3, f4] + [g1..g(k-1), f2][f1, f3, f4] in T(k+2)",
            &p(&first),
            t,
        ),
        lab.member(
            &format!("lemma22/k{k}/swap-f1-f4"),
            "[g1..g(k-1), f1][f2, f3, f4] + [g1..g(k-1), f4][f2, f3, f1] in T(k+2)",
            &p(&second),
            t,
        ),
        lab.member(
            &format!("lemma22/k{k}/congruence"),
            "[c1, h1][h2, h3] + [c1, h2][h1, h3] in T(k+2) for c1 = [g1..gk]",
            &p(&congruence),
            t,
        ),
    ];
    SuiteReport::new("lemma22", claims)
}

/// All permutations of {1,2,3,4} in lexicographic order.
pub fn permutations4() -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 1..=4 {
        for b in 1..=4 {
            for c in 1..=4 {
                for d in 1..=4 {
                    let s = [a, b, c, d];
                    if (1..=4).all(|i| s.contains(&i)) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

fn sign(s: &[u32; 4]) -> i32 {
    let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| s[i] > s[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `[g.., f_σ1][f_σ2, f_σ3, f_σ4] ≡ sign(σ)[g.., f1][f2, f3, f4] mod T(k+2)`.
pub fn check_cor23(lab: &Lab, k: u32, sigmas: &[[u32; 4]]) -> SuiteReport {
    let base = p(&format!("{}*[y2,y3,y4]", gf(k, "y1")));
    let claims = sigmas
        .iter()
        .map(|s| {
            let permuted = p(&format!(
                "{}*[y{},y{},y{}]",
                gf(k, &format!("y{}", s[0])),
                s[1],
                s[2],
                s[3]
            ));
            let diff = &permuted - &base.scale(&sign(s).into());
            lab.member(
                &format!("cor23/k{k}/sigma-{}{}{}{}", s[0], s[1], s[2], s[3]),
                "[g1..g(k-1), f_s(1)][f_s(2), f_s(3), f_s(4)] = sign(s)[g1..g(k-1), f1][f2, f3, f4] mod T(k+2)",
                &diff,
                k as usize + 2,
            )
        })
        .collect();
    SuiteReport::new("cor23", claims)
}

/// `3[a1..ak][b1, b2, b3] ∈ T(k+2)`, and the order of the product itself.
pub fn check_cor24(lab: &Lab, k: u32) -> SuiteReport {
    let t = k as usize + 2;
    let product = p(&xy_product(k, 3));
    let mut claims = vec![lab.member(
        &format!("cor24/k{k}/times-3"),
        "3[a1..ak][b1, b2, b3] in T(k+2)",
        &product.scale(&3.into()),
        t,
    )];
    let id = format!("cor24/k{k}/order");
    claims.push(if k == 3 {
        lab.order_is(&id, "[a1, a2, a3][b1, b2, b3] in T(5)", &product, t, Order::one())
    } else {
        lab.order_evidence(&id, "order of [a1..ak][b1, b2, b3] modulo T(k+2)", &product, t)
    });
    SuiteReport::new("cor24", claims)
}

/// `3[cu, v, w] ∈ T(k+2)` for `c = [a1..ak]`, plus the instances of
/// `[T(k), A]` for odd and even k.
pub fn check_lemma25(lab: &Lab, k: u32) -> SuiteReport {
    let t = k as usize + 2;
    let c = bracket(&vars('x', 1, k));
    let cuvw = p(&format!("[{c}*y1,y2,y3]"));
    let mut claims = vec![
        lab.member(
            &format!("lemma25/k{k}/times-3"),
            "3[cu, v, w] in T(k+2) for c = [a1..ak]",
            &cuvw.scale(&3.into()),
            t,
        ),
        lab.order_evidence(
            &format!("lemma25/k{k}/order"),
            "order of [cu, v, w] modulo T(k+2) for c = [a1..ak]",
            &cuvw,
            t,
        ),
    ];
    if k == 2 {
        claims.push(lab.member(
            "lemma25/odd-instance",
            "3[T(2k'+1), A] in T(2k'+2) at k' = 1: 3[[a1, a2, a3]u, v] in T(4)",
            &p("3*[[x1,x2,x3]*y1,y2]"),
            4,
        ));
        claims.push(lab.order_is(
            "lemma25/even-instance",
            "l[T(2k'), A] not in T(2k'+1) for every l != 0, at k' = 1: [[a1, a2]u, v] has infinite order modulo T(3)",
            &p("[[x1,x2]*y1,y2]"),
            3,
            Order::Infinite,
        ));
    }
    SuiteReport::new("lemma25", claims)
}

/// `3^q` times the product of commutators lies in `T(N)`.
pub fn check_corollary13(lab: &Lab, spec: &ProductSpec) -> SuiteReport {
    let list = spec.n_list.iter().map(ToString::to_string).collect::<Vec<_>>().join("-");
    let coefficient = num_bigint::BigInt::from(3u32).pow(spec.q);
    let mut claim = lab.member(
        &format!("corollary13/{list}"),
        "3^q [a11..a1n1]...[ak1..aknk] in T(N) with N = n1 + ... + nk - 2(k-1) + q",
        &spec.product().scale(&coefficient),
        spec.n as usize,
    );
    claim.detail = format!("l={} q={} N={}; {}", spec.ell, spec.q, spec.n, claim.detail);
    SuiteReport::new("corollary13", vec![claim])
}

/// The coefficient-3 product theorem for all `m + n ≤ max`, together with
/// the sharpness facts at (3,2), the (3,3) exception and the even-even
/// obstruction.
pub fn theorem_sweep(lab: &Lab, max: u32) -> SuiteReport {
    let mut claims = Vec::new();
    for m in 1..max {
        for n in 1..=max - m {
            if m % 2 == 0 && n % 2 == 0 {
                continue;
            }
            claims.push(lab.member(
                &format!("theorem/{m}x{n}"),
                "3[a1..am][b1..bn] in T(m+n-1) when m or n is odd",
                &p(&xy_product(m, n)).scale(&3.into()),
                (m + n - 1) as usize,
            ));
        }
    }
    let sharp = p(&xy_product(3, 2));
    for ell in 1..=2 {
        claims.push(lab.not_member(
            &format!("theorem/sharpness-3x2/l{ell}"),
            "[a1, a2, a3][b1, b2] not in T(4), so the coefficient 3 cannot be lowered",
            &sharp.scale(&ell.into()),
            4,
        ));
    }
    claims.push(lab.member(
        "theorem/sharpness-3x2/l3",
        "3[a1, a2, a3][b1, b2] in T(4)",
        &sharp.scale(&3.into()),
        4,
    ));
    claims.push(lab.order_is(
        "theorem/sharpness-3x2/order",
        "[a1, a2, a3][b1, b2] has order 3 modulo T(4)",
        &sharp,
        4,
        Order::finite(3),
    ));
    claims.push(lab.member(
        "theorem/exception-3x3",
        "[a1, a2, a3][b1, b2, b3] in T(5) with coefficient 1",
        &p(&xy_product(3, 3)),
        5,
    ));
    for m in (2..max).step_by(2) {
        for n in (2..=max - m).step_by(2) {
            claims.push(lab.order_is(
                &format!("theorem/even-{m}x{n}"),
                "l[a1..a2m'][b1..b2n'] not in T(2m'+2n'-1) for every l != 0",
                &p(&xy_product(m, n)),
                (m + n - 1) as usize,
                Order::Infinite,
            ));
        }
    }
    SuiteReport::new("theorem", claims)
}

/// `[a1..am][b1..bn] ∈ T(m+n-2)` for `2 ≤ m, n` and `m + n ≤ max`.
pub fn latyshev_baseline(lab: &Lab, max: u32) -> SuiteReport {
    let mut claims = Vec::new();
    for m in 2..=max.saturating_sub(2) {
        for n in 2..=max - m {
            claims.push(lab.member(
                &format!("baseline/{m}x{n}"),
                "[a1..am][b1..bn] in T(m+n-2) for m, n > 1",
                &p(&xy_product(m, n)),
                (m + n - 2) as usize,
            ));
        }
    }
    SuiteReport::new("baseline", claims)
}

/// Orders of `[x1..xm][y1..yn]` modulo `T(m+n-1)` for `m, n ≥ 2`, one of
/// them odd. Only divisibility by 3 and the two settled cases are asserted.
pub fn conjecture_scan(lab: &Lab, max: u32) -> SuiteReport {
    let mut claims = Vec::new();
    for total in 4..=max {
        for m in 2..=total - 2 {
            let n = total - m;
            if m % 2 == 0 && n % 2 == 0 {
                continue;
            }
            let product = p(&xy_product(m, n));
            let k = (total - 1) as usize;
            let id = format!("scan/{m}x{n}");
            claims.push(lab.order_divides(
                &format!("{id}/divides-3"),
                "the order of [a1..am][b1..bn] modulo T(m+n-1) divides 3 when m or n is odd",
                &product,
                k,
                3,
            ));
            claims.push(match (m, n) {
                (3, 2) => lab.order_is(
                    &format!("{id}/order"),
                    "[a1, a2, a3][b1, b2] + T(4) has order 3",
                    &product,
                    k,
                    Order::finite(3),
                ),
                (3, 3) => lab.order_is(
                    &format!("{id}/order"),
                    "[a1, a2, a3][b1, b2, b3] in T(5)",
                    &product,
                    k,
                    Order::one(),
                ),
                _ => lab.order_evidence(
                    &format!("{id}/order"),
                    "conjectured: the product is not in T(m+n-1) unless (m, n) = (3, 3)",
                    &product,
                    k,
                ),
            });
        }
    }
    SuiteReport::new("scan", claims)
}

fn torsion_free(q: &QuotientStructure) -> bool {
    q.torsion.is_empty()
}

fn elementary_3(q: &QuotientStructure) -> bool {
    q.torsion.iter().all(|d| *d == 3.into())
}

fn nontrivial_elementary_3(q: &QuotientStructure) -> bool {
    !q.torsion.is_empty() && elementary_3(q)
}

/// Structure of quotient components. Asserted: `T(2)` and `T(3)`
/// quotients are free abelian, the `T(4)` quotient has only elementary
/// 3-torsion, nontrivially so in degree 5. Reported only: `T(5)` and
/// `T(6)`.
pub fn torsion_scan(lab: &Lab) -> SuiteReport {
    let ml = MultiDegree::multilinear_x;
    let deg = |s: &str| MultiDegree::from_str(s).expect("multidegree");
    let free = "the additive group of Z<X>/T(k) is free abelian for k = 2, 3";
    let three = "the additive group of Z<X>/T(4) is a free abelian group plus an elementary abelian 3-group";
    let mut claims = vec![lab.torsion(
        "torsion/k2/x1-x2",
        "Z^2 modulo the span of (1, -1) is Z",
        2,
        &ml(2),
        Some(&|q: &QuotientStructure| q.free_rank == 1 && torsion_free(q)),
    )];
    for n in 3..=4 {
        claims.push(lab.torsion(&format!("torsion/k2/multilinear-{n}"), free, 2, &ml(n), Some(&torsion_free)));
    }
    for n in 3..=6 {
        claims.push(lab.torsion(&format!("torsion/k3/multilinear-{n}"), free, 3, &ml(n), Some(&torsion_free)));
    }
    claims.push(lab.torsion("torsion/k3/x1e2-x2-x3", free, 3, &deg("x1^2,x2,x3"), Some(&torsion_free)));
    claims.push(lab.torsion("torsion/k4/multilinear-4", three, 4, &ml(4), Some(&elementary_3)));
    claims.push(lab.torsion(
        "torsion/k4/multilinear-5",
        "the 3-torsion of Z<X>/T(4) is nontrivial: [a1, a2, a3][b1, b2] has order 3",
        4,
        &ml(5),
        Some(&nontrivial_elementary_3),
    ));
    claims.push(lab.torsion("torsion/k4/multilinear-6", three, 4, &ml(6), Some(&elementary_3)));
    claims.push(lab.torsion("torsion/k4/x1e2-x2-x3-x4", three, 4, &deg("x1^2,x2,x3,x4"), Some(&elementary_3)));
    let open = "open: whether Z<X>/T(k) is free for k = 5 and has nontrivial 3-torsion for k > 5";
    for n in 5..=6 {
        claims.push(lab.torsion(&format!("torsion/k5/multilinear-{n}"), open, 5, &ml(n), None));
    }
    if lab.slow {
        claims.push(lab.torsion("torsion/k6/multilinear-7", open, 6, &ml(7), None));
    }
    SuiteReport::new("torsion", claims)
}
