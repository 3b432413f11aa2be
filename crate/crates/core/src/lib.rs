//! Commutator T-ideals of the free associative ring over the integers.
//!
//! `T(k)` is the two-sided ideal generated by all left-normed commutators
//! `[a1, ..., ak]`. Each multihomogeneous component of `T(k)` is a finitely
//! generated lattice inside the component's integer coordinate space, so
//! membership, element orders in the quotient, and quotient torsion reduce
//! to exact integer linear algebra.

pub mod basis;
pub mod experiments;
pub mod freering;
pub mod intlattice;
pub mod tideal;
