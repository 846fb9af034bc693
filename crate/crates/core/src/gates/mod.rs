//! Permutation gates, multi-controlled-NOT circuits and cycle structures.

mod circuit;
mod cycle;
mod permutation;

pub use circuit::{parse_circuit, Circuit, CircuitGate};
pub use cycle::CycleStructure;
pub use permutation::PermutationGate;

/// Permutation realised by a circuit.
pub fn circuit_to_permutation(c: &Circuit) -> PermutationGate {
    c.to_permutation()
}

pub fn to_cycle_structure(p: &PermutationGate) -> CycleStructure {
    CycleStructure::from_permutation(p)
}

pub fn from_cycle_structure(cs: &CycleStructure) -> PermutationGate {
    cs.to_permutation()
}

pub fn canonical_notation(cs: &CycleStructure) -> String {
    cs.canonical_notation()
}

pub fn permutation_order(p: &PermutationGate) -> u64 {
    p.order()
}

pub fn wire_mismatch(c: &Circuit) -> usize {
    c.wire_mismatch()
}
