//! Clifford recognition, hierarchy levels, semi-Clifford testing and the
//! groups of diagonal gates.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::PermutationGate;
use crate::gf2::{max_isotropic_dim, BitVec};
use crate::monomial::MonomialOperator;
use crate::pauli::{index_to_bitvec, qubit_bit};

/// Outcome of a level computation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "value", rename_all = "snake_case")]
pub enum LevelVerdict {
    /// The smallest `k` with the operator in `CH_k`.
    Level(u32),
    /// Not in `CH_k` for any `k ≤ cap`.
    NotInChUpTo(u32),
}

impl LevelVerdict {
    pub fn level(self) -> Option<u32> {
        match self {
            LevelVerdict::Level(k) => Some(k),
            LevelVerdict::NotInChUpTo(_) => None,
        }
    }

    pub fn in_ch(self) -> bool {
        matches!(self, LevelVerdict::Level(_))
    }

    /// True when the verdict certifies membership in `CH_k`.
    pub fn at_most(self, k: u32) -> bool {
        matches!(self, LevelVerdict::Level(l) if l <= k)
    }
}

impl fmt::Display for LevelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelVerdict::Level(k) => write!(f, "Level {k}"),
            LevelVerdict::NotInChUpTo(c) => write!(f, "Not in CH up to level {c}"),
        }
    }
}

/// Default level cap for `n`-qubit operators.
pub fn default_cap(n: usize) -> u32 {
    n as u32 + 2
}

fn pauli_conjugates_are(
    u: &MonomialOperator,
    inv: &[u32],
    pred: impl Fn(&MonomialOperator) -> bool,
) -> bool {
    let n = u.num_qubits();
    (0..n).all(|q| {
        let b = qubit_bit(n, q);
        pred(&u.conjugate_masks(inv, b, 0)) && pred(&u.conjugate_masks(inv, 0, b))
    })
}

/// True iff `u` conjugates every Pauli generator to a Pauli.
pub fn is_clifford(u: &MonomialOperator) -> bool {
    let inv = u.inverse_perm();
    pauli_conjugates_are(u, &inv, MonomialOperator::is_pauli)
}

/// True iff every Pauli conjugate of `u` is Clifford. Cliffords form a group,
/// so checking the `2n` generators suffices.
pub fn is_in_ch3(u: &MonomialOperator) -> bool {
    let inv = u.inverse_perm();
    pauli_conjugates_are(u, &inv, is_clifford)
}

/// Representative of `u` modulo left multiplication by Paulis and global
/// phase. Hierarchy levels are constant on these classes.
pub fn canonical_mod_pauli(u: &MonomialOperator) -> MonomialOperator {
    let n = u.num_qubits();
    let a = u.perm()[0];
    let perm: Vec<u32> = u.perm().iter().map(|&p| p ^ a).collect();
    let (d, scale) = if u.denom().is_multiple_of(2) {
        (u.denom(), 1)
    } else {
        (u.denom() * 2, 2)
    };
    let p0 = u.phase_numerators()[0] * scale;
    let mut phase: Vec<u64> = u
        .phase_numerators()
        .iter()
        .map(|&p| (p * scale + d - p0) % d)
        .collect();
    let mut inv = vec![0u32; perm.len()];
    for (j, &p) in perm.iter().enumerate() {
        inv[p as usize] = j as u32;
    }
    let half = d / 2;
    let mut b = 0usize;
    for q in 0..n {
        let e = qubit_bit(n, q);
        if phase[inv[e] as usize] >= half {
            b |= e;
        }
    }
    if b != 0 {
        for (j, ph) in phase.iter_mut().enumerate() {
            if (perm[j] as usize & b).count_ones() & 1 == 1 {
                *ph = (*ph + half) % d;
            }
        }
    }
    MonomialOperator::from_parts_unchecked(n, perm, phase, d)
}

#[derive(Clone, Copy, Debug)]
enum Memo {
    Exact(u32),
    Above(u32),
}

/// Memoized hierarchy-level computation.
///
/// Memo keys are canonical modulo left Pauli multiplication and global phase.
/// An oracle is meant to be used from one thread; parallel callers create one
/// per worker, which keeps results deterministic.
#[derive(Default)]
pub struct LevelOracle {
    memo: HashMap<MonomialOperator, Memo>,
}

impl LevelOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    /// Smallest `k ≤ cap` with `u ∈ CH_k`.
    pub fn level(&mut self, u: &MonomialOperator, cap: u32) -> LevelVerdict {
        let cap = cap.max(1);
        if u.is_pauli() {
            return LevelVerdict::Level(1);
        }
        let key = canonical_mod_pauli(u);
        match self.memo.get(&key) {
            Some(Memo::Exact(k)) => {
                return if *k <= cap {
                    LevelVerdict::Level(*k)
                } else {
                    LevelVerdict::NotInChUpTo(cap)
                }
            }
            Some(Memo::Above(c)) if *c >= cap => return LevelVerdict::NotInChUpTo(cap),
            _ => {}
        }
        let v = self.compute(&key, cap);
        let entry = match v {
            LevelVerdict::Level(k) => Memo::Exact(k),
            LevelVerdict::NotInChUpTo(c) => Memo::Above(c),
        };
        self.memo.insert(key, entry);
        v
    }

    fn compute(&mut self, u: &MonomialOperator, cap: u32) -> LevelVerdict {
        if cap < 2 {
            return LevelVerdict::NotInChUpTo(cap);
        }
        let n = u.num_qubits();
        let inv = u.inverse_perm();
        if pauli_conjugates_are(u, &inv, MonomialOperator::is_pauli) {
            return LevelVerdict::Level(2);
        }
        if cap < 3 {
            return LevelVerdict::NotInChUpTo(cap);
        }
        if pauli_conjugates_are(u, &inv, is_clifford) {
            return LevelVerdict::Level(3);
        }
        if cap < 4 {
            return LevelVerdict::NotInChUpTo(cap);
        }
        // Generators first: one of them is already known to be non-Clifford.
        let dim = 1usize << n;
        let gens = (0..n).flat_map(|q| [(qubit_bit(n, q), 0), (0, qubit_bit(n, q))]);
        let rest = (0..dim)
            .flat_map(|x| (0..dim).map(move |z| (x, z)))
            .filter(|&(x, z)| {
                (x, z) != (0, 0)
                    && !(x == 0 && z.is_power_of_two())
                    && !(z == 0 && x.is_power_of_two())
            });
        let mut top = 3;
        for (x, z) in gens.chain(rest) {
            let w = u.conjugate_masks(&inv, x, z);
            match self.level(&w, cap - 1) {
                LevelVerdict::Level(k) => top = top.max(k + 1),
                LevelVerdict::NotInChUpTo(_) => return LevelVerdict::NotInChUpTo(cap),
            }
        }
        LevelVerdict::Level(top)
    }
}

/// Level with a fresh oracle.
pub fn level(u: &MonomialOperator, cap: u32) -> LevelVerdict {
    LevelOracle::new().level(u, cap)
}

/// Basis (as `(x|z)` vectors) of the subspace of Paulis that `u` conjugates to
/// Paulis.
pub fn pauli_preserving_subspace(u: &MonomialOperator) -> Vec<BitVec> {
    let n = u.num_qubits();
    let dim = 1usize << n;
    let inv = u.inverse_perm();
    // XOR basis with distinct leading bits; only vectors outside the current
    // span need a conjugation.
    let mut basis: Vec<u128> = Vec::new();
    for x in 0..dim {
        for z in 0..dim {
            if (x, z) == (0, 0) {
                continue;
            }
            let v = BitVec::symplectic(&index_to_bitvec(n, x), &index_to_bitvec(n, z)).bits();
            let reduced = basis.iter().fold(v, |acc, &b| acc.min(acc ^ b));
            if reduced == 0 {
                continue;
            }
            if u.conjugate_masks(&inv, x, z).is_pauli() {
                basis.push(reduced);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
    }
    basis
        .into_iter()
        .map(|b| BitVec::from_bits(b, 2 * n))
        .collect()
}

/// True iff `u` maps some maximal abelian Pauli subgroup into the Pauli group.
pub fn is_semi_clifford(u: &MonomialOperator) -> bool {
    let n = u.num_qubits();
    max_isotropic_dim(&pauli_preserving_subspace(u)) >= n
}

/// A diagonal operator, gauge fixed so that entry 0 has phase 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiagonalGate {
    op: MonomialOperator,
}

impl DiagonalGate {
    /// Entry `j` is `exp(2πi·phase_num[j]/denom)`; the global phase is removed.
    pub fn new(n: usize, phase_num: Vec<u64>, denom: u64) -> Result<Self> {
        Ok(Self {
            op: MonomialOperator::diagonal(n, phase_num, denom)?.gauge_fixed(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            op: MonomialOperator::identity(n),
        }
    }

    pub fn from_monomial(m: &MonomialOperator) -> Result<Self> {
        if !m.is_diagonal() {
            return Err(Error::InvalidGate("operator is not diagonal".into()));
        }
        Ok(Self {
            op: m.gauge_fixed(),
        })
    }

    /// Phase `num/denom` turns on every basis state whose bits cover `mask`
    /// (a basis-index mask); `mask = 0` is a global phase and is dropped.
    pub fn controlled_phase(n: usize, mask: usize, num: u64, denom: u64) -> Result<Self> {
        let phases = (0..1usize << n)
            .map(|j| if j & mask == mask { num } else { 0 })
            .collect();
        Self::new(n, phases, denom)
    }

    pub fn num_qubits(&self) -> usize {
        self.op.num_qubits()
    }

    pub fn as_monomial(&self) -> &MonomialOperator {
        &self.op
    }

    pub fn into_monomial(self) -> MonomialOperator {
        self.op
    }

    pub fn phase_numerators(&self) -> &[u64] {
        self.op.phase_numerators()
    }

    pub fn denom(&self) -> u64 {
        self.op.denom()
    }

    pub fn compose(&self, other: &DiagonalGate) -> Result<DiagonalGate> {
        Ok(Self {
            op: self.op.compose(&other.op)?.gauge_fixed(),
        })
    }

    pub fn inverse(&self) -> DiagonalGate {
        Self {
            op: self.op.inverse().gauge_fixed(),
        }
    }

    /// `p · d · p⁻¹`.
    pub fn conjugate_by(&self, p: &PermutationGate) -> Result<DiagonalGate> {
        let pm = p.to_monomial();
        Self::from_monomial(&pm.compose(&self.op)?.compose(&pm.inverse())?)
    }

    /// Entry phases as reduced fractions, sorted, up to global phase: of all
    /// shifts that put some entry at phase 0, the smallest sorted list.
    /// Invariant under permutation conjugation.
    pub fn spectrum(&self) -> Vec<(u64, u64)> {
        let den = self.denom();
        let ph = self.phase_numerators();
        let mut shifts: Vec<u64> = ph.to_vec();
        shifts.sort_unstable();
        shifts.dedup();
        shifts
            .into_iter()
            .map(|s| {
                let mut v: Vec<u64> = ph.iter().map(|&p| (p + den - s) % den).collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap_or_default()
            .into_iter()
            .map(|p| {
                let g = num_integer::gcd(p, den);
                (p / g, den / g)
            })
            .collect()
    }

    /// Coefficients of the expansion into multi-controlled phases: entry
    /// `S` (a basis-index mask) is the phase, as a numerator over
    /// [`Self::denom`], applied when all qubits of `S` are 1.
    pub fn phase_polynomial(&self) -> Vec<u64> {
        let d = self.denom();
        let mut c: Vec<u64> = self.phase_numerators().to_vec();
        let dim = c.len();
        let mut step = 1;
        while step < dim {
            for j in 0..dim {
                if j & step != 0 {
                    c[j] = (c[j] + d - c[j ^ step]) % d;
                }
            }
            step <<= 1;
        }
        c
    }
}

/// Level of a diagonal gate from its multi-controlled phase expansion: a term
/// on `|S|` qubits with phase `odd/2^t` sits at level `|S| + t - 1`, and the
/// gate sits at the largest level of its terms.
pub fn diagonal_level(d: &DiagonalGate, cap: u32) -> LevelVerdict {
    let cap = cap.max(1);
    let Some(m) = d.as_monomial().phase_log_denom() else {
        return LevelVerdict::NotInChUpTo(cap);
    };
    let mut top = 1u32;
    for (s, &c) in d.phase_polynomial().iter().enumerate() {
        if s == 0 || c == 0 {
            continue;
        }
        let t = m - c.trailing_zeros();
        top = top.max(s.count_ones() + t - 1);
    }
    if top <= cap {
        LevelVerdict::Level(top)
    } else {
        LevelVerdict::NotInChUpTo(cap)
    }
}

/// Which diagonal group a [`DiagGroupSpec`] names.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum DiagGroupKind {
    /// Diagonal gates in `CH_k`.
    D,
    /// Diagonal gates whose entries are `2^k`-th roots of unity.
    Diag,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DiagGroupSpec {
    pub n: usize,
    pub k: u32,
    pub kind: DiagGroupKind,
}

impl DiagGroupSpec {
    pub fn new(n: usize, k: u32, kind: DiagGroupKind) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::OutOfRange("diagonal groups need n, k >= 1".into()));
        }
        Ok(Self { n, k, kind })
    }

    pub fn d(n: usize, k: u32) -> Result<Self> {
        Self::new(n, k, DiagGroupKind::D)
    }

    pub fn diag(n: usize, k: u32) -> Result<Self> {
        Self::new(n, k, DiagGroupKind::Diag)
    }

    /// Generators: `Λ^m(Z^{1/2^{k-1-m}})` on every `(m+1)`-subset for `D`,
    /// and a `2^k`-th root on every nonzero basis state for `Diag`.
    pub fn generators(&self) -> Vec<DiagonalGate> {
        let n = self.n;
        let dim = 1usize << n;
        match self.kind {
            DiagGroupKind::D => (1..dim)
                .filter(|s| (s.count_ones()) <= self.k)
                .map(|s| {
                    let m = s.count_ones() - 1;
                    DiagonalGate::controlled_phase(n, s, 1, 1u64 << (self.k - m))
                        .expect("valid diagonal")
                })
                .collect(),
            DiagGroupKind::Diag => (1..dim)
                .map(|j| {
                    let mut ph = vec![0u64; dim];
                    ph[j] = 1;
                    DiagonalGate::new(n, ph, 1u64 << self.k).expect("valid diagonal")
                })
                .collect(),
        }
    }
}

/// Membership in `D_k` (via [`diagonal_level`]) or `Diag_k`.
pub fn in_diag_group(d: &DiagonalGate, spec: &DiagGroupSpec) -> bool {
    if d.num_qubits() != spec.n {
        return false;
    }
    match spec.kind {
        DiagGroupKind::D => diagonal_level(d, spec.k).at_most(spec.k),
        DiagGroupKind::Diag => (1u64 << spec.k).is_multiple_of(d.denom()),
    }
}

/// `|D_k^n| = ∏_{j=0}^{min(k-1,n-1)} (2^{k-j})^{C(n,j+1)}` (gauge fixed).
pub fn diag_group_order(n: usize, k: u32) -> BigUint {
    let mut order = BigUint::from(1u32);
    let top = (k as usize - 1).min(n.saturating_sub(1));
    for j in 0..=top {
        let binom = binomial(n, j + 1);
        let exp = (k as usize - j) as u64 * binom;
        order *= BigUint::from(2u32).pow(exp as u32);
    }
    order
}

/// `|Diag_k^n| = (2^k)^{2^n - 1}` (gauge fixed).
pub fn diag_full_group_order(n: usize, k: u32) -> BigUint {
    BigUint::from(2u32).pow(k * ((1u32 << n) - 1))
}

fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Largest group the closure will build.
pub const DIAG_GROUP_GUARD: usize = 1 << 20;

/// Closure of [`DiagGroupSpec::generators`] by breadth-first search.
pub fn generate_diag_group(spec: &DiagGroupSpec) -> Result<HashSet<DiagonalGate>> {
    let n = spec.n;
    let dim = 1usize << n;
    let log_den = match spec.kind {
        DiagGroupKind::D => spec.k,
        DiagGroupKind::Diag => spec.k,
    };
    if log_den >= 63 || dim > 1 << 16 {
        return Err(Error::GuardExceeded(format!(
            "group D/Diag({n},{}) too large",
            spec.k
        )));
    }
    let den = 1u64 << log_den;
    let lift = |g: &DiagonalGate| -> Vec<u64> {
        let s = den / g.denom();
        g.phase_numerators().iter().map(|&p| p * s).collect()
    };
    let gens: Vec<Vec<u64>> = spec.generators().iter().map(lift).collect();
    let start = vec![0u64; dim];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for g in &gens {
            let next: Vec<u64> = cur.iter().zip(g).map(|(a, b)| (a + b) % den).collect();
            if seen.insert(next.clone()) {
                if seen.len() > DIAG_GROUP_GUARD {
                    return Err(Error::GuardExceeded(format!(
                        "closure exceeded {DIAG_GROUP_GUARD} elements"
                    )));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|ph| DiagonalGate::new(n, ph, den).expect("valid diagonal"))
        .collect())
}
