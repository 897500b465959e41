//! Bethe Ansatz diagonalization of the open q-difference Toda chain with
//! two-sided boundary interactions on the finite lattice `Lambda(n,m)`.
//!
//! The crate builds the hamiltonian and its self-adjointness weights,
//! evaluates `BC_m` Hall-Littlewood wave functions, solves the Bethe
//! equations by convex minimization, and checks the resulting eigenbasis
//! against a dense eigensolver. The `q -> 1` degeneration lives in
//! [`q1_limit`].

pub mod bethe;
pub mod cli;
pub mod error;
pub mod format;
pub mod hall_littlewood;
pub mod hamiltonian;
pub mod lattice;
pub mod linalg;
pub mod measures;
pub mod q1_limit;
pub mod spectrum;
pub mod verify;
mod special;

pub use error::{Error, Result};
