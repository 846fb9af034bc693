use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::PermutationGate;
use crate::hierarchy::{default_cap, is_semi_clifford, LevelOracle, LevelVerdict};

use super::profile::{ae_profile_with, Spectrum};
use super::{affine_generators, EquivalenceAction};

/// Largest `n` for which every permutation of `2^n` states is enumerated.
pub const MAX_FULL_CENSUS_QUBITS: usize = 3;

/// One two-sided affine equivalence class of `n`-qubit permutations.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PermClassRecord {
    /// Truth table of the lexicographically smallest member.
    pub representative: Vec<u32>,
    pub class_size: u64,
    pub level: LevelVerdict,
    pub in_ch: bool,
    pub semi_clifford: bool,
    pub ddt_spectrum: Spectrum,
    pub lat_spectrum: Spectrum,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PermCensus {
    pub n: usize,
    pub action: EquivalenceAction,
    pub cap: u32,
    pub total_permutations: u64,
    pub classes: Vec<PermClassRecord>,
}

impl PermCensus {
    pub fn num_in_ch(&self) -> usize {
        self.classes.iter().filter(|c| c.in_ch).count()
    }
}

fn encode(t: &[u32]) -> u64 {
    t.iter().fold(0u64, |acc, &v| (acc << 4) | v as u64)
}

fn decode(code: u64, dim: usize) -> Vec<u32> {
    (0..dim)
        .map(|i| ((code >> (4 * (dim - 1 - i))) & 0xf) as u32)
        .collect()
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Connected components of all `n`-qubit permutations under left and right
/// multiplication by CNOT and X gates.
pub fn count_ae_classes_full(n: usize) -> Result<PermCensus> {
    if n == 0 || n > MAX_FULL_CENSUS_QUBITS {
        return Err(Error::GuardExceeded(format!(
            "full permutation census needs 1 <= n <= {MAX_FULL_CENSUS_QUBITS}, got {n}"
        )));
    }
    let dim = 1usize << n;
    let gens: Vec<Vec<u32>> = affine_generators(n)
        .iter()
        .map(|g| g.table().to_vec())
        .collect();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut reps: Vec<(Vec<u32>, u64)> = Vec::new();
    let mut cur: Vec<u32> = (0..dim as u32).collect();
    let mut total = 0u64;
    loop {
        total += 1;
        let code = encode(&cur);
        if seen.insert(code) {
            let mut size = 1u64;
            let mut queue = VecDeque::from([code]);
            while let Some(c) = queue.pop_front() {
                let t = decode(c, dim);
                for g in &gens {
                    let left: Vec<u32> = t.iter().map(|&v| g[v as usize]).collect();
                    let right: Vec<u32> = g.iter().map(|&v| t[v as usize]).collect();
                    for next in [encode(&left), encode(&right)] {
                        if seen.insert(next) {
                            size += 1;
                            queue.push_back(next);
                        }
                    }
                }
            }
            reps.push((cur.clone(), size));
        }
        if !next_permutation(&mut cur) {
            break;
        }
    }
    let cap = default_cap(n);
    let mut oracle = LevelOracle::new();
    let classes = reps
        .into_iter()
        .map(|(table, size)| {
            let p = PermutationGate::new(n, table.clone()).expect("enumerated permutation");
            let profile = ae_profile_with(&p, EquivalenceAction::TwoSided, &mut oracle, cap);
            PermClassRecord {
                representative: table,
                class_size: size,
                level: profile.level,
                in_ch: profile.level.in_ch(),
                semi_clifford: is_semi_clifford(&p.to_monomial()),
                ddt_spectrum: profile.ddt_spectrum,
                lat_spectrum: profile.lat_spectrum,
            }
        })
        .collect();
    Ok(PermCensus {
        n,
        action: EquivalenceAction::TwoSided,
        cap,
        total_permutations: total,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_censuses() {
        let c1 = count_ae_classes_full(1).unwrap();
        assert_eq!(c1.classes.len(), 1);
        assert_eq!(c1.total_permutations, 2);
        let c2 = count_ae_classes_full(2).unwrap();
        assert_eq!(c2.classes.len(), 1);
        assert_eq!(c2.classes[0].class_size, 24);
        assert!(count_ae_classes_full(4).is_err());
    }
}
