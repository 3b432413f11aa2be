//! Lattices of commutator ideals in multidegree components.

mod generators;
mod lattice;
mod query;
pub mod store;

use thiserror::Error;

pub use generators::{enumerate_generators, multilinear_generator_count, GeneratorDescription, GeneratorSpec};
pub use lattice::{assemble_lattice, ComponentResult, TComponentLattice};
pub use query::{order_in_quotient, quotient_torsion, t_membership, ComponentVerdict, MembershipReport, QueryOptions};
pub use store::LatticeStore;

use crate::basis::BasisError;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TidealError {
    #[error("commutator length must be at least 1, got {0}")]
    InvalidK(usize),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("internal error: certificate failed recombination in component {degree}")]
    CertificateRejected { degree: String },
    #[error("the zero polynomial has no components to test")]
    ZeroInput,
    #[error("lattice cache: {0}")]
    Cache(String),
}
