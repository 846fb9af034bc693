use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gates::{Circuit, CircuitGate};
use crate::hierarchy::{default_cap, is_semi_clifford, LevelOracle, LevelVerdict};

use super::profile::{ae_profile_with, AeProfile};
use super::two_sided::{affine_group, two_sided_canonical_with};
use super::EquivalenceAction;

/// The five 4-qubit representatives of the affine classes in the hierarchy,
/// with their expected levels.
pub fn four_qubit_representatives() -> Vec<(&'static str, Circuit, u32)> {
    let mcx = |c: &[usize], t: usize| CircuitGate::mcx(c, t).expect("valid gate");
    let build = |gates: Vec<CircuitGate>| Circuit::new(4, gates).expect("valid circuit");
    vec![
        ("identity", Circuit::empty(4), 1),
        ("CCCX(0,1,2;3)", build(vec![mcx(&[0, 1, 2], 3)]), 4),
        ("CCX(1,2;3)", build(vec![mcx(&[1, 2], 3)]), 3),
        (
            "CCCX(0,1,2;3) CCX(0,1;2)",
            build(vec![mcx(&[0, 1, 2], 3), mcx(&[0, 1], 2)]),
            4,
        ),
        (
            "CCX(0,1;2) CCX(1,2;3)",
            build(vec![mcx(&[0, 1], 2), mcx(&[1, 2], 3)]),
            4,
        ),
    ]
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RepresentativeReport {
    pub name: String,
    pub circuit: String,
    pub expected_level: u32,
    pub level: LevelVerdict,
    pub semi_clifford: bool,
    pub profile: AeProfile,
    /// Smallest truth table in the two-sided affine class.
    pub canonical_form: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FourQubitReport {
    pub representatives: Vec<RepresentativeReport>,
    pub levels_match: bool,
    /// Index pairs of representatives with equal invariant profiles.
    pub profile_collisions: Vec<(usize, usize)>,
    /// Index pairs of representatives with equal canonical forms.
    pub canonical_collisions: Vec<(usize, usize)>,
}

impl FourQubitReport {
    /// Levels match and the representatives lie in distinct classes.
    pub fn passed(&self) -> bool {
        self.levels_match && self.canonical_collisions.is_empty()
    }
}

fn equal_pairs<T: PartialEq>(items: &[T]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i] == items[j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Computes levels, invariant profiles and canonical forms of the five
/// representatives.
pub fn verify_4q_representatives() -> Result<FourQubitReport> {
    let cap = default_cap(4);
    let group = affine_group(4)?;
    let mut oracle = LevelOracle::new();
    let representatives: Vec<RepresentativeReport> = four_qubit_representatives()
        .into_iter()
        .map(|(name, circuit, expected)| {
            let p = circuit.to_permutation();
            let profile = ae_profile_with(&p, EquivalenceAction::TwoSided, &mut oracle, cap);
            RepresentativeReport {
                name: name.to_string(),
                circuit: circuit.to_string(),
                expected_level: expected,
                level: profile.level,
                semi_clifford: is_semi_clifford(&p.to_monomial()),
                profile,
                canonical_form: two_sided_canonical_with(&p, &group),
            }
        })
        .collect();
    let levels_match = representatives
        .iter()
        .all(|r| r.level == LevelVerdict::Level(r.expected_level));
    let profiles: Vec<&AeProfile> = representatives.iter().map(|r| &r.profile).collect();
    let forms: Vec<&Vec<u32>> = representatives.iter().map(|r| &r.canonical_form).collect();
    let profile_collisions = equal_pairs(&profiles);
    let canonical_collisions = equal_pairs(&forms);
    Ok(FourQubitReport {
        representatives,
        levels_match,
        profile_collisions,
        canonical_collisions,
    })
}
