//! Affine equivalence classes of permutation gates.

mod census;
mod cycles;
mod equivalence;
mod profile;
mod two_sided;
mod verify;

use serde::{Deserialize, Serialize};

use crate::gates::PermutationGate;

pub use census::{count_ae_classes_full, PermCensus, PermClassRecord, MAX_FULL_CENSUS_QUBITS};
pub use cycles::{
    affine_key, all_structures, canonical_representative, classify_cycle_structures,
    classify_cycle_structures_with, count_structures, extend_classification, normalize_shape,
    representative_permutation, shape_label, table_shapes, AffineKey, ChBasis,
    ClassificationMethod, ClassifyOptions, CycleClassRecord, CycleClassification, TwoSidedMethod,
    MAX_DIRECT_QUBITS, MAX_POINTS, MAX_QUBITS, MAX_TABLE_POINTS,
};
pub use equivalence::{
    decompose_monomial_clifford, monomial_equiv_implies_affine, sample_monomial_equivalence,
    MonomialEquivalence,
};
pub use profile::{
    ae_profile, ae_profile_with, ddt_spectrum, degree_profile, lat_spectrum, profile_with_level,
    AeProfile, Spectrum,
};
pub use two_sided::{
    affine_group, two_sided_canonical, two_sided_canonical_with, MAX_TWO_SIDED_QUBITS,
};
pub use verify::{
    four_qubit_representatives, verify_4q_representatives, FourQubitReport, RepresentativeReport,
};

/// How affine permutations act on permutations.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceAction {
    /// `P ↦ L P R`.
    TwoSided,
    /// `P ↦ L P L⁻¹`.
    Conjugation,
}

/// The `n(n-1)` CNOTs followed by the `n` single-qubit X gates.
pub fn affine_generators(n: usize) -> Vec<PermutationGate> {
    let mut gens = Vec::with_capacity(n * n);
    for c in 0..n {
        for t in 0..n {
            if c != t {
                gens.push(PermutationGate::cnot(n, c, t));
            }
        }
    }
    gens.extend((0..n).map(|q| PermutationGate::x(n, q)));
    gens
}

#[cfg(test)]
mod tests {
    use std::collections::{HashSet, VecDeque};

    use super::*;

    #[test]
    fn generator_counts() {
        assert_eq!(affine_generators(1), vec![PermutationGate::x(1, 0)]);
        assert_eq!(affine_generators(2).len(), 4);
        assert_eq!(affine_generators(3).len(), 9);
    }

    #[test]
    fn closure_at_two_qubits_is_agl() {
        let gens = affine_generators(2);
        let id = PermutationGate::identity(2);
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &gens {
                let q = g.compose(&p).unwrap();
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        assert_eq!(seen.len(), 24);
        assert!(seen.iter().all(PermutationGate::is_affine));
    }
}
