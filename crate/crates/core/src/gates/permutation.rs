use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gf2::{AffineMap, BitMatrix};
use crate::monomial::MonomialOperator;
use crate::pauli::{bitvec_to_index, index_to_bitvec, qubit_bit};

/// A permutation of the `2^n` computational basis states, stored as a truth
/// table: `|j⟩ ↦ |table[j]⟩`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PermutationGate {
    n: usize,
    table: Vec<u32>,
}

impl PermutationGate {
    pub fn new(n: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: table.len(),
            });
        }
        let mut seen = vec![false; table.len()];
        for &t in &table {
            let t = t as usize;
            if t >= seen.len() || seen[t] {
                return Err(Error::NotABijection(format!(
                    "state {t} repeated or out of range"
                )));
            }
            seen[t] = true;
        }
        Ok(Self { n, table })
    }

    pub(crate) fn from_table_unchecked(n: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), 1 << n);
        Self { n, table }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            table: (0..(1u32 << n)).collect(),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(n, (0..1usize << n).map(|j| f(j) as u32).collect())
    }

    /// Multi-controlled X; `controls` are `(wire, polarity)` pairs where
    /// polarity `true` fires on `|1⟩`.
    pub fn mcx(n: usize, controls: &[(usize, bool)], target: usize) -> Self {
        let t = qubit_bit(n, target);
        let mut care = 0usize;
        let mut want = 0usize;
        for &(w, pol) in controls {
            let b = qubit_bit(n, w);
            care |= b;
            if pol {
                want |= b;
            }
        }
        let table = (0..1usize << n)
            .map(|j| {
                if j & care == want {
                    (j ^ t) as u32
                } else {
                    j as u32
                }
            })
            .collect();
        Self { n, table }
    }

    pub fn x(n: usize, q: usize) -> Self {
        Self::mcx(n, &[], q)
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Self {
        Self::mcx(n, &[(control, true)], target)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, state: usize) -> usize {
        self.table[state] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(j, &t)| t as usize == j)
    }

    /// Operator product `self · other`: apply `other` first.
    pub fn compose(&self, other: &PermutationGate) -> Result<PermutationGate> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let table = other
            .table
            .iter()
            .map(|&j| self.table[j as usize])
            .collect();
        Ok(Self { n: self.n, table })
    }

    pub fn inverse(&self) -> PermutationGate {
        let mut table = vec![0u32; self.table.len()];
        for (j, &t) in self.table.iter().enumerate() {
            table[t as usize] = j as u32;
        }
        Self { n: self.n, table }
    }

    pub fn to_monomial(&self) -> MonomialOperator {
        MonomialOperator::from_parts_unchecked(
            self.n,
            self.table.clone(),
            vec![0; self.table.len()],
            1,
        )
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest state,
    /// listed in order of that state.
    pub fn raw_cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.table.len()];
        let mut cycles = Vec::new();
        for start in 0..self.table.len() {
            if seen[start] || self.table[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j as u32);
                j = self.table[j] as usize;
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.raw_cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Prepends a new control wire 0; the permutation acts only when that wire
    /// equals `polarity`.
    pub fn add_control(&self, polarity: bool) -> PermutationGate {
        let top = 1usize << self.n;
        let mut table = Vec::with_capacity(2 * top);
        for j in 0..2 * top {
            let on = (j & top != 0) == polarity;
            if on {
                table.push(((j & top) | self.table[j & (top - 1)] as usize) as u32);
            } else {
                table.push(j as u32);
            }
        }
        Self {
            n: self.n + 1,
            table,
        }
    }

    /// The affine map `v ↦ A v + b` (per-qubit bit vectors) realised by this
    /// permutation, if it is affine.
    pub fn affine_map(&self) -> Option<AffineMap> {
        let n = self.n;
        let b = self.table[0] as usize;
        let mut cols = Vec::with_capacity(n);
        let mut images = Vec::with_capacity(n);
        for q in 0..n {
            let img = self.table[qubit_bit(n, q)] as usize ^ b;
            images.push(img);
            cols.push(index_to_bitvec(n, img));
        }
        for j in 0..self.table.len() {
            let mut expect = b;
            for (q, &img) in images.iter().enumerate() {
                if j & qubit_bit(n, q) != 0 {
                    expect ^= img;
                }
            }
            if self.table[j] as usize != expect {
                return None;
            }
        }
        let linear = BitMatrix::from_col_vecs(&cols).ok()?;
        AffineMap::new(linear, index_to_bitvec(n, b)).ok()
    }

    pub fn is_affine(&self) -> bool {
        self.affine_map().is_some()
    }

    pub fn from_affine_map(map: &AffineMap) -> PermutationGate {
        let n = map.dim();
        let table = (0..1usize << n)
            .map(|j| bitvec_to_index(&map.apply(&index_to_bitvec(n, j)).expect("square")) as u32)
            .collect();
        Self { n, table }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toffoli_swaps_six_and_seven() {
        let ccx = PermutationGate::mcx(3, &[(0, true), (1, true)], 2);
        let mut expect: Vec<u32> = (0..8).collect();
        expect.swap(6, 7);
        assert_eq!(ccx.table(), &expect[..]);
        assert_eq!(ccx.order(), 2);
    }

    #[test]
    fn order_is_lcm() {
        assert_eq!(PermutationGate::identity(2).order(), 1);
        // (0 1 2 3)(4 5)
        let p = PermutationGate::new(3, vec![1, 2, 3, 0, 5, 4, 6, 7]).unwrap();
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn add_control_of_x_is_cx() {
        assert_eq!(
            PermutationGate::x(1, 0).add_control(true),
            PermutationGate::cnot(2, 0, 1)
        );
        let anti = PermutationGate::x(1, 0).add_control(false);
        assert_eq!(anti, PermutationGate::mcx(2, &[(0, false)], 1));
    }

    #[test]
    fn affine_detection() {
        let cx = PermutationGate::cnot(3, 2, 0);
        let map = cx.affine_map().unwrap();
        assert_eq!(PermutationGate::from_affine_map(&map), cx);
        assert!(PermutationGate::x(3, 1).is_affine());
        assert!(!PermutationGate::mcx(3, &[(0, true), (1, true)], 2).is_affine());
    }
}
