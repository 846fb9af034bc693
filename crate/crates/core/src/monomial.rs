//! Exact monomial (generalized permutation) operators.
//!
//! A [`MonomialOperator`] on `n` qubits maps basis state `|j⟩` to
//! `exp(2πi · phase[j] / denom) |perm[j]⟩`. Phases are kept as numerators over
//! a single common denominator, reduced so that the denominator is minimal.
//! Every operator this crate handles (permutations, diagonal gates, Paulis and
//! their products) lives in this representation.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::pauli::{qubit_bit, PauliString};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialOperator {
    n: usize,
    perm: Vec<u32>,
    phase: Vec<u64>,
    denom: u64,
}

fn reduce(phase: &mut [u64], denom: &mut u64) {
    let mut g = *denom;
    for &p in phase.iter() {
        if g == 1 {
            break;
        }
        g = g.gcd(&p);
    }
    if g > 1 {
        for p in phase.iter_mut() {
            *p /= g;
        }
        *denom /= g;
    }
}

fn check_bijection(perm: &[u32]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for (j, &p) in perm.iter().enumerate() {
        let p = p as usize;
        if p >= perm.len() {
            return Err(Error::NotABijection(format!(
                "image {p} of {j} is out of range"
            )));
        }
        if seen[p] {
            return Err(Error::NotABijection(format!("state {p} has two preimages")));
        }
        seen[p] = true;
    }
    Ok(())
}

impl MonomialOperator {
    /// Builds `|j⟩ ↦ exp(2πi·phase_num[j]/denom) |perm[j]⟩`.
    pub fn new(n: usize, perm: Vec<u32>, phase_num: Vec<u64>, denom: u64) -> Result<Self> {
        let dim = 1usize << n;
        if perm.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: perm.len(),
            });
        }
        if phase_num.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: phase_num.len(),
            });
        }
        if denom == 0 {
            return Err(Error::OutOfRange(
                "phase denominator must be positive".into(),
            ));
        }
        check_bijection(&perm)?;
        let mut phase: Vec<u64> = phase_num.into_iter().map(|p| p % denom).collect();
        let mut denom = denom;
        reduce(&mut phase, &mut denom);
        Ok(Self {
            n,
            perm,
            phase,
            denom,
        })
    }

    pub(crate) fn from_parts_unchecked(
        n: usize,
        perm: Vec<u32>,
        mut phase: Vec<u64>,
        mut denom: u64,
    ) -> Self {
        debug_assert_eq!(perm.len(), 1 << n);
        reduce(&mut phase, &mut denom);
        Self {
            n,
            perm,
            phase,
            denom,
        }
    }

    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        Self {
            n,
            perm: (0..dim as u32).collect(),
            phase: vec![0; dim],
            denom: 1,
        }
    }

    pub fn permutation(n: usize, table: Vec<u32>) -> Result<Self> {
        let dim = table.len();
        Self::new(n, table, vec![0; dim], 1)
    }

    pub fn diagonal(n: usize, phase_num: Vec<u64>, denom: u64) -> Result<Self> {
        Self::new(n, (0..(1u32 << n)).collect(), phase_num, denom)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn phase_numerators(&self) -> &[u64] {
        &self.phase
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// `m` with `denom = 2^m`, or `None` when some phase is not dyadic.
    pub fn phase_log_denom(&self) -> Option<u32> {
        self.denom
            .is_power_of_two()
            .then(|| self.denom.trailing_zeros())
    }

    pub fn is_dyadic(&self) -> bool {
        self.denom.is_power_of_two()
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p as usize == j)
    }

    /// True when every phase equals the phase of column 0.
    pub fn is_permutation_up_to_phase(&self) -> bool {
        self.phase.iter().all(|&p| p == self.phase[0])
    }

    pub fn inverse_perm(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = j as u32;
        }
        inv
    }

    fn check_same_n(&self, other: &MonomialOperator) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &MonomialOperator) -> Result<MonomialOperator> {
        self.check_same_n(other)?;
        let l = self.denom.lcm(&other.denom);
        let sa = l / self.denom;
        let sb = l / other.denom;
        let mut perm = Vec::with_capacity(self.dim());
        let mut phase = Vec::with_capacity(self.dim());
        for j in 0..other.dim() {
            let mid = other.perm[j] as usize;
            perm.push(self.perm[mid]);
            phase.push((other.phase[j] * sb + self.phase[mid] * sa) % l);
        }
        Ok(Self::from_parts_unchecked(self.n, perm, phase, l))
    }

    pub fn inverse(&self) -> MonomialOperator {
        let mut perm = vec![0u32; self.dim()];
        let mut phase = vec![0u64; self.dim()];
        for (j, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = j as u32;
            phase[p as usize] = (self.denom - self.phase[j]) % self.denom;
        }
        Self {
            n: self.n,
            perm,
            phase,
            denom: self.denom,
        }
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: u64) -> MonomialOperator {
        let mut result = MonomialOperator::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base).expect("same size");
            }
            base = base.compose(&base).expect("same size");
            k >>= 1;
        }
        result
    }

    /// The same operator with the global phase chosen so column 0 has phase 0.
    pub fn gauge_fixed(&self) -> MonomialOperator {
        let p0 = self.phase[0];
        let phase = self
            .phase
            .iter()
            .map(|&p| (p + self.denom - p0) % self.denom)
            .collect();
        Self::from_parts_unchecked(self.n, self.perm.clone(), phase, self.denom)
    }

    /// Multiplies by the global phase `exp(2πi·num/denom)`.
    pub fn with_global_phase(&self, num: u64, denom: u64) -> MonomialOperator {
        let l = self.denom.lcm(&denom);
        let s = l / self.denom;
        let add = (num % denom) * (l / denom);
        let phase = self.phase.iter().map(|&p| (p * s + add) % l).collect();
        Self::from_parts_unchecked(self.n, self.perm.clone(), phase, l)
    }

    /// `u · P · u†` for the phase-free Pauli `X^x Z^z` given as basis-index
    /// masks, using a precomputed inverse permutation of `self`.
    pub fn conjugate_masks(
        &self,
        inv_perm: &[u32],
        x_mask: usize,
        z_mask: usize,
    ) -> MonomialOperator {
        let l = if self.denom.is_multiple_of(2) {
            self.denom
        } else {
            self.denom * 2
        };
        let s = l / self.denom;
        let half = l / 2;
        let dim = self.dim();
        let mut perm = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        for &k in &inv_perm[..dim] {
            let k = k as usize;
            let kx = k ^ x_mask;
            perm.push(self.perm[kx]);
            let mut ph = self.phase[kx] * s + l - self.phase[k] * s;
            if (z_mask & k).count_ones() & 1 == 1 {
                ph += half;
            }
            phase.push(ph % l);
        }
        Self::from_parts_unchecked(self.n, perm, phase, l)
    }

    /// Returns `u · p · u†`; the result is always monomial.
    pub fn conjugate(&self, p: &PauliString) -> Result<MonomialOperator> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let inv = self.inverse_perm();
        let q = self.conjugate_masks(&inv, p.x_index_mask(), p.z_index_mask());
        Ok(q.with_global_phase(p.phase_i_power() as u64, 4))
    }

    /// Phase-free Pauli masks `(x, z)` with `self = e^{iθ} X^x Z^z`, if any.
    pub fn pauli_masks(&self) -> Option<(usize, usize)> {
        let x = self.perm[0] as usize;
        if self
            .perm
            .iter()
            .enumerate()
            .any(|(j, &p)| p as usize != j ^ x)
        {
            return None;
        }
        let d = self.denom;
        let half = if d.is_multiple_of(2) { d / 2 } else { 0 };
        let p0 = self.phase[0];
        let mut z = 0usize;
        for q in 0..self.n {
            let b = qubit_bit(self.n, q);
            let delta = (self.phase[b] + d - p0) % d;
            if delta != 0 {
                if half == 0 || delta != half {
                    return None;
                }
                z |= b;
            }
        }
        let ok = self.phase.iter().enumerate().all(|(j, &ph)| {
            let expect = if (z & j).count_ones() & 1 == 1 {
                (p0 + half) % d
            } else {
                p0
            };
            ph == expect
        });
        ok.then_some((x, z))
    }

    pub fn is_pauli(&self) -> bool {
        self.pauli_masks().is_some()
    }

    /// The Pauli equal to `self` up to a global phase. The `i`-power of the
    /// result is exact when the global phase is a power of `i` and 0 otherwise.
    pub fn as_pauli(&self) -> Option<PauliString> {
        let (x, z) = self.pauli_masks()?;
        let p = PauliString::from_index_masks(self.n, x, z);
        let (num, den) = (self.phase[0], self.denom);
        let i_power = if 4 % den == 0 { num * (4 / den) } else { 0 };
        Some(p.with_phase(i_power as u8))
    }

    /// True iff `self = e^{iθ} other` for some global phase.
    pub fn equal_up_to_phase(&self, other: &MonomialOperator) -> bool {
        self.n == other.n && self.gauge_fixed() == other.gauge_fixed()
    }

    pub fn equal_exact(&self, other: &MonomialOperator) -> bool {
        self == other
    }

    /// Phase of column `j` as a reduced fraction `(num, denom)` of a turn.
    pub fn phase_of(&self, j: usize) -> (u64, u64) {
        let g = self.phase[j].gcd(&self.denom);
        (self.phase[j] / g, self.denom / g)
    }
}

impl fmt::Debug for MonomialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial(n={}, ", self.n)?;
        for j in 0..self.dim() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", j, self.perm[j])?;
            if self.phase[j] != 0 {
                write!(f, "@{}/{}", self.phase[j], self.denom)?;
            }
        }
        write!(f, ")")
    }
}

/// Phase-free Pauli `X^x Z^z` as a monomial operator.
pub fn pauli_masks_to_monomial(n: usize, x_mask: usize, z_mask: usize) -> MonomialOperator {
    let dim = 1usize << n;
    let perm = (0..dim).map(|j| (j ^ x_mask) as u32).collect();
    let phase = (0..dim)
        .map(|j| ((z_mask & j).count_ones() & 1) as u64)
        .collect();
    MonomialOperator::from_parts_unchecked(n, perm, phase, 2)
}

/// `i^p X^x Z^z` as a monomial: `|j⟩ ↦ i^p (-1)^{z·j} |j ⊕ x⟩`.
pub fn pauli_to_monomial(p: &PauliString) -> MonomialOperator {
    let n = p.num_qubits();
    pauli_masks_to_monomial(n, p.x_index_mask(), p.z_index_mask())
        .with_global_phase(p.phase_i_power() as u64, 4)
}
