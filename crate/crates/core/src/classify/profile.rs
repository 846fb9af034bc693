use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gates::{CycleStructure, PermutationGate};
use crate::hierarchy::{default_cap, LevelOracle, LevelVerdict};

use super::EquivalenceAction;

/// Histogram of table entries as `(value, count)` pairs in increasing value.
pub type Spectrum = Vec<(u32, u64)>;

fn histogram(values: impl Iterator<Item = u32>) -> Spectrum {
    let mut h: BTreeMap<u32, u64> = BTreeMap::new();
    for v in values {
        *h.entry(v).or_default() += 1;
    }
    h.into_iter().collect()
}

fn ddt_table(p: &PermutationGate) -> Vec<Vec<u32>> {
    let t = p.table();
    let dim = t.len();
    (0..dim)
        .map(|a| {
            let mut row = vec![0u32; dim];
            for x in 0..dim {
                row[(t[x ^ a] ^ t[x]) as usize] += 1;
            }
            row
        })
        .collect()
}

/// Histogram of the difference distribution table
/// `N(a, b) = |{x : p(x ⊕ a) ⊕ p(x) = b}|` over all `(a, b)`.
pub fn ddt_spectrum(p: &PermutationGate) -> Spectrum {
    histogram(ddt_table(p).into_iter().flatten())
}

fn fwht(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn lat_table(p: &PermutationGate) -> Vec<Vec<u32>> {
    let t = p.table();
    let dim = t.len();
    let mut f = vec![0i32; dim];
    (0..dim)
        .map(|b| {
            for x in 0..dim {
                f[x] = if (t[x] as usize & b).count_ones() & 1 == 1 {
                    -1
                } else {
                    1
                };
            }
            fwht(&mut f);
            f.iter().map(|w| w.unsigned_abs()).collect()
        })
        .collect()
}

/// Histogram of `|W(a, b)|` with `W(a, b) = Σ_x (-1)^{a·x ⊕ b·p(x)}`.
pub fn lat_spectrum(p: &PermutationGate) -> Spectrum {
    histogram(lat_table(p).into_iter().flatten())
}

/// Sorted row histograms followed by sorted column histograms. Affine maps on
/// either side only permute rows and columns of these tables.
fn line_profile(table: &[Vec<u32>]) -> Vec<Spectrum> {
    let dim = table.len();
    let mut rows: Vec<Spectrum> = table.iter().map(|r| histogram(r.iter().copied())).collect();
    let mut cols: Vec<Spectrum> = (0..dim)
        .map(|c| histogram(table.iter().map(|r| r[c])))
        .collect();
    rows.sort();
    cols.sort();
    rows.extend(cols);
    rows
}

fn component_degrees(t: &[u32]) -> Spectrum {
    let dim = t.len();
    let mut anf = vec![0u8; dim];
    histogram((1..dim).map(|b| {
        for x in 0..dim {
            anf[x] = ((t[x] as usize & b).count_ones() & 1) as u8;
        }
        let mut step = 1;
        while step < dim {
            for x in 0..dim {
                if x & step != 0 {
                    anf[x] ^= anf[x ^ step];
                }
            }
            step <<= 1;
        }
        (0..dim)
            .filter(|&m| anf[m] == 1)
            .map(|m| m.count_ones())
            .max()
            .unwrap_or(0)
    }))
}

/// Algebraic degrees of the nonzero component functions of `p` and of `p⁻¹`.
pub fn degree_profile(p: &PermutationGate) -> (Spectrum, Spectrum) {
    (
        component_degrees(p.table()),
        component_degrees(p.inverse().table()),
    )
}

/// Invariants of an affine equivalence class.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AeProfile {
    pub ddt_spectrum: Spectrum,
    pub lat_spectrum: Spectrum,
    pub ddt_lines: Vec<Spectrum>,
    pub lat_lines: Vec<Spectrum>,
    pub degrees: (Spectrum, Spectrum),
    /// Cycle shape; only an invariant under conjugation.
    pub cycle_type: Option<Vec<usize>>,
    pub level: LevelVerdict,
}

pub fn ae_profile_with(
    p: &PermutationGate,
    action: EquivalenceAction,
    oracle: &mut LevelOracle,
    cap: u32,
) -> AeProfile {
    let level = oracle.level(&p.to_monomial(), cap);
    profile_with_level(p, action, level)
}

/// Profile of `p` with an already known level.
pub fn profile_with_level(
    p: &PermutationGate,
    action: EquivalenceAction,
    level: LevelVerdict,
) -> AeProfile {
    let ddt = ddt_table(p);
    let lat = lat_table(p);
    AeProfile {
        ddt_spectrum: histogram(ddt.iter().flatten().copied()),
        lat_spectrum: histogram(lat.iter().flatten().copied()),
        ddt_lines: line_profile(&ddt),
        lat_lines: line_profile(&lat),
        degrees: degree_profile(p),
        cycle_type: match action {
            EquivalenceAction::Conjugation => Some(CycleStructure::from_permutation(p).shape()),
            EquivalenceAction::TwoSided => None,
        },
        level,
    }
}

/// Profile with a fresh oracle and the default cap.
pub fn ae_profile(p: &PermutationGate, action: EquivalenceAction) -> AeProfile {
    ae_profile_with(
        p,
        action,
        &mut LevelOracle::new(),
        default_cap(p.num_qubits()),
    )
}
