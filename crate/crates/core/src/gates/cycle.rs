use std::fmt::Write as _;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::index_to_bitvec;

use super::PermutationGate;

/// The non-fixed states of a permutation grouped into disjoint cycles.
///
/// States are stored as basis indices (qubit 0 is the most significant bit).
/// Cycles are kept canonical: each cycle starts at its largest state and
/// cycles are sorted in descending order of that leading state.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CycleStructure {
    n: usize,
    cycles: Vec<Vec<u32>>,
}

pub(crate) fn canonicalize(cycles: &mut [Vec<u32>]) {
    for c in cycles.iter_mut() {
        let (pos, _) = c
            .iter()
            .enumerate()
            .max_by_key(|&(_, &v)| v)
            .expect("cycles are non-empty");
        c.rotate_left(pos);
    }
    cycles.sort_by(|a, b| b[0].cmp(&a[0]));
}

impl CycleStructure {
    pub fn new(n: usize, cycles: Vec<Vec<u32>>) -> Result<Self> {
        let dim = 1u64 << n;
        let mut seen = std::collections::HashSet::new();
        for c in &cycles {
            if c.len() < 2 {
                return Err(Error::OutOfRange(format!(
                    "cycle {c:?} has length {} < 2",
                    c.len()
                )));
            }
            for &s in c {
                if s as u64 >= dim {
                    return Err(Error::OutOfRange(format!("state {s} on {n} qubits")));
                }
                if !seen.insert(s) {
                    return Err(Error::DuplicateState(s));
                }
            }
        }
        let mut cycles = cycles;
        canonicalize(&mut cycles);
        Ok(Self { n, cycles })
    }

    /// Builds from per-qubit column vectors, one inner list per cycle.
    pub fn from_columns(n: usize, cycles: &[Vec<BitVec>]) -> Result<Self> {
        let ints = cycles
            .iter()
            .map(|c| {
                c.iter()
                    .map(|v| {
                        if v.len() != n {
                            Err(Error::DimensionMismatch {
                                expected: n,
                                found: v.len(),
                            })
                        } else {
                            Ok(crate::pauli::bitvec_to_index(v) as u32)
                        }
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, ints)
    }

    pub fn identity(n: usize) -> Self {
        Self { n, cycles: vec![] }
    }

    pub fn from_permutation(p: &PermutationGate) -> Self {
        let mut cycles = p.raw_cycles();
        canonicalize(&mut cycles);
        Self {
            n: p.num_qubits(),
            cycles,
        }
    }

    pub fn to_permutation(&self) -> PermutationGate {
        let mut table: Vec<u32> = (0..(1u32 << self.n)).collect();
        for c in &self.cycles {
            for (i, &s) in c.iter().enumerate() {
                table[s as usize] = c[(i + 1) % c.len()];
            }
        }
        PermutationGate::from_table_unchecked(self.n, table)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn num_points(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Cycle lengths sorted in descending order.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn order(&self) -> u64 {
        self.cycles
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Columns in canonical order as per-qubit bit vectors.
    pub fn columns(&self) -> Vec<BitVec> {
        self.cycles
            .iter()
            .flatten()
            .map(|&s| index_to_bitvec(self.n, s as usize))
            .collect()
    }

    /// The `n × k` matrix whose columns are the non-fixed states.
    pub fn matrix(&self) -> BitMatrix {
        if self.cycles.is_empty() {
            return BitMatrix::zeros(self.n, 0);
        }
        BitMatrix::from_col_vecs(&self.columns()).expect("uniform column length")
    }

    /// Rendered as e.g. `(15,5)(8,7)(3,1,2)`; the identity renders as `""`.
    pub fn canonical_notation(&self) -> String {
        let mut s = String::new();
        for c in &self.cycles {
            s.push('(');
            for (i, v) in c.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{v}");
            }
            s.push(')');
        }
        s
    }

    /// Applies a state map to every column and re-canonicalizes. The map must
    /// be injective on the states involved.
    pub fn map_states(&self, f: impl Fn(u32) -> u32) -> CycleStructure {
        let mut cycles: Vec<Vec<u32>> = self
            .cycles
            .iter()
            .map(|c| c.iter().map(|&s| f(s)).collect())
            .collect();
        canonicalize(&mut cycles);
        Self { n: self.n, cycles }
    }

    /// Adds a constant top row (the new wire 0) to every column.
    pub fn extend_with_control(&self, polarity: bool) -> CycleStructure {
        let top = if polarity { 1u32 << self.n } else { 0 };
        let mut cycles: Vec<Vec<u32>> = self
            .cycles
            .iter()
            .map(|c| c.iter().map(|&s| s | top).collect())
            .collect();
        canonicalize(&mut cycles);
        Self {
            n: self.n + 1,
            cycles,
        }
    }
}
