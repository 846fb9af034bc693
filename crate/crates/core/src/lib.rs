//! Permutation gates in the qubit Clifford hierarchy.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf2`]: bit-packed GF(2) vectors, matrices, affine maps and the
//!   symplectic form.
//! - [`pauli`] and [`monomial`]: exact Pauli strings and monomial operators
//!   with root-of-unity phases.
//! - [`gates`]: truth-table permutations, multi-controlled-NOT circuits and
//!   cycle structures.
//! - [`hierarchy`]: Clifford recognition, hierarchy levels, semi-Clifford
//!   testing and diagonal gate groups.
//! - [`classify`]: affine equivalence classes of permutations and of cycle
//!   structures.
//! - [`search`]: the exhaustive check of third-level 4-qubit gates.
//!
//! Basis states are indexed with qubit 0 as the most significant bit.

pub mod classify;
pub mod error;
pub mod gates;
pub mod gf2;
pub mod hierarchy;
pub mod monomial;
pub mod pauli;
pub mod search;

pub use error::{Error, Result};
pub use gates::{Circuit, CircuitGate, CycleStructure, PermutationGate};
pub use gf2::{AffineMap, BitMatrix, BitVec};
pub use hierarchy::{DiagonalGate, LevelOracle, LevelVerdict};
pub use monomial::MonomialOperator;
pub use pauli::PauliString;

/// Printed in report headers so the bit-order convention is never implicit.
pub const STATE_INDEX_CONVENTION: &str =
    "qubit 0 is the most significant bit of the basis-state index";
