use rayon::prelude::*;

use super::generators::{enumerate_generators, GeneratorSpec};
use super::TidealError;
use crate::basis::{enumerate_basis, ComponentBasis, IntVector};
use crate::freering::{MultiDegree, Polynomial};
use crate::intlattice::{
    verify_sparse_certificate, EchelonBasis, IntMatrix, MembershipCertificate, Order, QuotientStructure, Reduction,
    SparseRow,
};

/// `T(k)` intersected with one multidegree component, as a row lattice.
#[derive(Debug)]
pub struct TComponentLattice {
    k: usize,
    basis: ComponentBasis,
    generators: Vec<GeneratorSpec>,
    rows: Vec<SparseRow>,
    echelon: EchelonBasis,
}

pub(crate) struct Prepared {
    pub k: usize,
    pub basis: ComponentBasis,
    pub generators: Vec<GeneratorSpec>,
    pub rows: Vec<SparseRow>,
}

/// Basis, generators and generator rows; no elimination yet.
pub(crate) fn prepare(k: usize, d: &MultiDegree, degree_cap: u32) -> Result<Prepared, TidealError> {
    if k == 0 {
        return Err(TidealError::InvalidK(k));
    }
    let basis = enumerate_basis(d, degree_cap)?;
    let generators = enumerate_generators(k, &basis);
    let rows: Vec<SparseRow> = generators.par_iter().map(|g| g.row(&basis)).collect();
    Ok(Prepared {
        k,
        basis,
        generators,
        rows,
    })
}

/// Builds the lattice of `T(k)` in the component of multidegree `d`.
pub fn assemble_lattice(k: usize, d: &MultiDegree, degree_cap: u32) -> Result<TComponentLattice, TidealError> {
    let p = prepare(k, d, degree_cap)?;
    let echelon = EchelonBasis::from_rows(p.basis.len(), &p.rows);
    Ok(TComponentLattice::from_parts(p, echelon))
}

/// Verdict for one multihomogeneous component.
#[derive(Clone, Debug)]
pub struct ComponentResult {
    pub member: bool,
    pub order: Order,
    pub certificate: Option<MembershipCertificate>,
}

impl TComponentLattice {
    pub(crate) fn from_parts(p: Prepared, echelon: EchelonBasis) -> TComponentLattice {
        TComponentLattice {
            k: p.k,
            basis: p.basis,
            generators: p.generators,
            rows: p.rows,
            echelon,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> &MultiDegree {
        self.basis.degree()
    }

    pub fn basis(&self) -> &ComponentBasis {
        &self.basis
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn generator_rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn echelon(&self) -> &EchelonBasis {
        &self.echelon
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Dense generator matrix (one row per generator).
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::new(self.basis.len(), self.rows.iter().map(|r| r.to_dense(self.basis.len())).collect())
            .expect("rectangular")
    }

    pub fn coordinates(&self, p: &Polynomial) -> Result<SparseRow, TidealError> {
        let pairs = self.basis.sparse_coordinates(p)?;
        Ok(SparseRow::from_pairs(pairs.into_iter().map(|(c, v)| (c as u32, v))))
    }

    pub fn contains_vector(&self, t: &SparseRow) -> bool {
        self.echelon.contains(t)
    }

    /// Certificate over the generators, re-verified by recombination.
    pub fn certify(&self, t: &SparseRow) -> Result<Option<MembershipCertificate>, TidealError> {
        match self.echelon.reduce(t) {
            Reduction::NotMember => Ok(None),
            Reduction::Member(combo) => {
                let cert = MembershipCertificate::from_sparse(&combo);
                if !verify_sparse_certificate(&self.rows, &cert, t) {
                    return Err(TidealError::CertificateRejected {
                        degree: self.degree().to_string(),
                    });
                }
                Ok(Some(cert))
            }
        }
    }

    pub fn order_of(&self, t: &SparseRow) -> Order {
        self.echelon.order_of(t)
    }

    /// Membership, order and certificate of a homogeneous element of this
    /// component.
    pub fn evaluate(&self, p: &Polynomial) -> Result<ComponentResult, TidealError> {
        let t = self.coordinates(p)?;
        let certificate = self.certify(&t)?;
        let order = self.order_of(&t);
        let member = certificate.is_some();
        debug_assert_eq!(member, order.is_one());
        Ok(ComponentResult {
            member,
            order,
            certificate,
        })
    }

    pub fn quotient_structure(&self) -> QuotientStructure {
        let (free_rank, torsion) = self.echelon.quotient_structure();
        QuotientStructure { free_rank, torsion }
    }

    pub fn vectorize(&self, p: &Polynomial) -> Result<IntVector, TidealError> {
        Ok(self.basis.vectorize(p)?)
    }
}
