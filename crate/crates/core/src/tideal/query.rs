use std::time::Instant;

use serde::Serialize;

use super::store::LatticeStore;
use super::TidealError;
use crate::basis::check_degree_cap;
use crate::freering::{MultiDegree, Polynomial};
use crate::intlattice::modp::{excludes, ModpEchelon};
use crate::intlattice::{MembershipCertificate, Order, QuotientStructure, SparseRow};

#[derive(Clone, Debug, Default)]
pub struct QueryOptions {
    /// Primes for the modular rejection test tried before the integer
    /// lattice. Empty disables it.
    pub prescreen_primes: Vec<u64>,
    /// Embed full certificates, not only their digests.
    pub include_certificates: bool,
    /// Record wall-clock times. Off by default so reports are reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub multidegree: String,
    pub basis_size: usize,
    pub generator_count: usize,
    /// Rank of the component lattice; absent when a prescreen decided.
    pub rank: Option<usize>,
    pub member: bool,
    /// Absent when a prescreen decided.
    pub order: Option<Order>,
    /// `lattice`, or `mod p` for a modular rejection.
    pub decided_by: String,
    pub certificate_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<MembershipCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub input: String,
    pub k: usize,
    pub member: bool,
    /// Least common multiple of the component orders, infinite absorbing.
    /// Absent only if some component was rejected by a prescreen and none
    /// has infinite order.
    pub order: Option<Order>,
    pub components: Vec<ComponentVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

struct Part {
    degree: MultiDegree,
    /// Canonical relabelling of `degree`, which keys the lattice.
    canonical: MultiDegree,
    /// The component, relabelled onto `canonical`.
    element: Polynomial,
}

fn checked_components(p: &Polynomial, store: &LatticeStore) -> Result<Vec<Part>, TidealError> {
    if p.is_zero() {
        return Err(TidealError::ZeroInput);
    }
    let parts = p.components();
    for d in parts.keys() {
        check_degree_cap(d, store.degree_cap())?;
    }
    Ok(parts
        .into_iter()
        .map(|(degree, q)| {
            let (canonical, relabel) = degree.canonical();
            Part {
                element: q.rename(|v| relabel[&v]),
                degree,
                canonical,
            }
        })
        .collect())
}

/// `(prime, basis size, generator count)` if some prime rejects `q`.
fn prescreen(
    store: &LatticeStore,
    k: usize,
    d: &MultiDegree,
    q: &Polynomial,
    primes: &[u64],
) -> Result<Option<(u64, usize, usize)>, TidealError> {
    if primes.is_empty() || store.resident(k, d).is_some() {
        return Ok(None);
    }
    let prepared = super::lattice::prepare(k, d, store.degree_cap())?;
    let pairs = prepared.basis.sparse_coordinates(q)?;
    let t = SparseRow::from_pairs(pairs.into_iter().map(|(c, v)| (c as u32, v)));
    for &p in primes {
        if excludes(&ModpEchelon::from_rows(prepared.basis.len(), p, &prepared.rows), &t) {
            return Ok(Some((p, prepared.basis.len(), prepared.rows.len())));
        }
    }
    Ok(None)
}

/// Decides `p ∈ T(k)` component by component. Components are relabelled
/// onto `x1, x2, ...` first, so lattices are shared between components of
/// the same shape; certificates index the generators of the shared lattice.
/// Every positive verdict carries a certificate that has been checked by
/// recombination.
pub fn t_membership(
    store: &LatticeStore,
    p: &Polynomial,
    k: usize,
    options: &QueryOptions,
) -> Result<MembershipReport, TidealError> {
    let start = Instant::now();
    let parts = checked_components(p, store)?;
    let mut components = Vec::with_capacity(parts.len());
    for part in &parts {
        let t0 = Instant::now();
        let millis = |t: Instant| options.timing.then(|| t.elapsed().as_millis() as u64);
        let (d, q) = (&part.canonical, &part.element);
        if let Some((prime, basis_size, generator_count)) = prescreen(store, k, d, q, &options.prescreen_primes)? {
            components.push(ComponentVerdict {
                multidegree: part.degree.to_string(),
                basis_size,
                generator_count,
                rank: None,
                member: false,
                order: None,
                decided_by: format!("mod {prime}"),
                certificate_digest: None,
                certificate: None,
                millis: millis(t0),
            });
            continue;
        }
        let lattice = store.lattice(k, d)?;
        let result = lattice.evaluate(q)?;
        components.push(ComponentVerdict {
            multidegree: part.degree.to_string(),
            basis_size: lattice.basis().len(),
            generator_count: lattice.generators().len(),
            rank: Some(lattice.rank()),
            member: result.member,
            order: Some(result.order),
            decided_by: "lattice".to_string(),
            certificate_digest: result.certificate.as_ref().map(MembershipCertificate::digest),
            certificate: result.certificate.filter(|_| options.include_certificates),
            millis: millis(t0),
        });
    }
    let member = components.iter().all(|c| c.member);
    let order = overall_order(components.iter().map(|c| c.order.as_ref()));
    Ok(MembershipReport {
        input: p.to_string(),
        k,
        member,
        order,
        components,
        millis: options.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

fn overall_order<'a>(orders: impl Iterator<Item = Option<&'a Order>>) -> Option<Order> {
    let mut acc = Some(Order::one());
    let mut unknown = false;
    for o in orders {
        match o {
            Some(Order::Infinite) => return Some(Order::Infinite),
            Some(o) => acc = acc.map(|a| a.lcm(o)),
            None => unknown = true,
        }
    }
    if unknown {
        None
    } else {
        acc
    }
}

/// Order of `p` in the additive group of the quotient by `T(k)`.
pub fn order_in_quotient(store: &LatticeStore, p: &Polynomial, k: usize) -> Result<Order, TidealError> {
    let mut order = Order::one();
    for part in checked_components(p, store)? {
        let lattice = store.lattice(k, &part.canonical)?;
        order = order.lcm(&lattice.order_of(&lattice.coordinates(&part.element)?));
        if order.is_infinite() {
            break;
        }
    }
    Ok(order)
}

/// Free rank and torsion of one component of the quotient by `T(k)`.
pub fn quotient_torsion(store: &LatticeStore, k: usize, d: &MultiDegree) -> Result<QuotientStructure, TidealError> {
    Ok(store.lattice(k, &d.canonical().0)?.quotient_structure())
}
