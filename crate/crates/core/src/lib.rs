//! Physically accessible entanglement between localized fermionic orbitals.
//!
//! Local operations on fermionic orbitals must respect a superselection rule:
//! local fermion-number parity (P-SSR) always, and local particle number
//! (N-SSR) when that is also conserved. This crate evaluates the entanglement
//! that survives those restrictions for pairs of spinful orbitals:
//!
//! - [`fock`]: occupation-number Fock space, fermionic operator strings and
//!   reduced states of orbital subsets.
//! - [`channels`]: the superselection pinching maps, SWAP and the superselected
//!   swap protocol that transfers orbital entanglement onto qubit registers.
//! - [`entanglement`]: entropies, the closed-form N-SSR measure and a
//!   Frank–Wolfe solver for the relative entropy of entanglement.
//! - [`freefermion`]: Slater determinants, one-particle density matrices,
//!   block entropies and Wick construction of two-orbital states.
//! - [`tightbinding`]: closed-form results for the periodic tight-binding chain.
//! - [`interacting`]: FCIDUMP ingestion, Hubbard rings and exact
//!   diagonalization.
//!
//! All entropies use the natural logarithm unless converted explicitly.

pub mod channels;
pub mod density;
pub mod entanglement;
mod error;
pub mod fock;
pub mod freefermion;
pub mod interacting;
pub mod linalg;
pub mod table;
pub mod tightbinding;

pub use density::DensityMatrix;
pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
