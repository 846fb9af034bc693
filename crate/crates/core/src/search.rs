//! Exhaustive check that third-level 4-qubit gates are semi-Clifford.
//!
//! Every candidate is a product `π d` of the Toffoli class representative
//! `π = CCX(1,2;3)` and a diagonal gate `d` taken from a parameterized family
//! of diagonal classes (diagonal gates up to diagonal Cliffords). Two families
//! are provided: the restricted one with 4096 members, built from terms that
//! all touch the target wire, and the full one with `2^20` members.
//!
//! `π d` is in the third level iff `π X d X d⁻¹ π⁻¹` is Clifford for every
//! X-string `X`. Survivors of that test are checked for semi-Cliffordness.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gates::{CycleStructure, PermutationGate};
use crate::hierarchy::{diagonal_level, is_semi_clifford, DiagonalGate};
use crate::pauli::qubit_bit;

/// Qubits of the swept gates.
pub const SWEEP_QUBITS: usize = 4;
/// Phases in the families are multiples of `1/PHASE_DENOM`.
pub const PHASE_DENOM: u64 = 8;

const RESTRICTED_A: [&[usize]; 4] = [&[0, 1, 2, 3], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];
const RESTRICTED_B: [&[usize]; 3] = [&[0, 3], &[1, 3], &[2, 3]];
const RESTRICTED_C: [usize; 1] = [3];

const FULL_A: [&[usize]; 5] = [
    &[0, 1, 2, 3],
    &[0, 1, 2],
    &[0, 1, 3],
    &[0, 2, 3],
    &[1, 2, 3],
];
const FULL_B: [&[usize]; 6] = [&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]];
const FULL_C: [usize; 4] = [0, 1, 2, 3];

/// Positions in the full family of the restricted terms `a`, `b`, `c`.
const FULL_OF_RESTRICTED_A: [usize; 4] = [0, 2, 3, 4];
const FULL_OF_RESTRICTED_B: [usize; 3] = [2, 4, 5];
const FULL_OF_RESTRICTED_C: [usize; 1] = [3];

/// Which parameterized family a [`DiagClass`] belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSpace {
    /// `a ∈ Z_4^4`, `b ∈ Z_2^3`, `c ∈ Z_2`: 4096 classes.
    Restricted,
    /// `a ∈ Z_4^5`, `b ∈ Z_2^6`, `c ∈ Z_2^4`: `2^20` classes.
    Full,
}

impl ClassSpace {
    fn shape(self) -> (usize, usize, usize) {
        match self {
            ClassSpace::Restricted => (4, 3, 1),
            ClassSpace::Full => (5, 6, 4),
        }
    }

    fn terms(
        self,
    ) -> (
        &'static [&'static [usize]],
        &'static [&'static [usize]],
        &'static [usize],
    ) {
        match self {
            ClassSpace::Restricted => (&RESTRICTED_A, &RESTRICTED_B, &RESTRICTED_C),
            ClassSpace::Full => (&FULL_A, &FULL_B, &FULL_C),
        }
    }

    /// Number of classes in the family.
    pub fn size(self) -> usize {
        let (na, nb, nc) = self.shape();
        1 << (2 * na + nb + nc)
    }
}

/// One diagonal class: exponents of the `a` terms (multi-controlled `S`,
/// mod 4), `b` terms (controlled `S`, mod 2) and `c` terms (`T`, mod 2).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DiagClass {
    space: ClassSpace,
    a: [u8; 5],
    b: [u8; 6],
    c: [u8; 4],
}

impl DiagClass {
    pub fn new(space: ClassSpace, a: &[u8], b: &[u8], c: &[u8]) -> Result<Self> {
        let (na, nb, nc) = space.shape();
        if a.len() != na || b.len() != nb || c.len() != nc {
            return Err(Error::DimensionMismatch {
                expected: na + nb + nc,
                found: a.len() + b.len() + c.len(),
            });
        }
        if let Some(v) = a.iter().find(|&&v| v > 3) {
            return Err(Error::OutOfRange(format!("a exponent {v} not in 0..4")));
        }
        if let Some(v) = b.iter().chain(c).find(|&&v| v > 1) {
            return Err(Error::OutOfRange(format!("b/c exponent {v} not in 0..2")));
        }
        let mut dc = DiagClass {
            space,
            a: [0; 5],
            b: [0; 6],
            c: [0; 4],
        };
        dc.a[..na].copy_from_slice(a);
        dc.b[..nb].copy_from_slice(b);
        dc.c[..nc].copy_from_slice(c);
        Ok(dc)
    }

    /// The class with the given [`Self::index`].
    pub fn from_index(space: ClassSpace, index: usize) -> Result<Self> {
        if index >= space.size() {
            return Err(Error::OutOfRange(format!(
                "class index {index} >= {}",
                space.size()
            )));
        }
        let (na, nb, nc) = space.shape();
        let mut dc = DiagClass {
            space,
            a: [0; 5],
            b: [0; 6],
            c: [0; 4],
        };
        let mut rest = index;
        for i in (0..nc).rev() {
            dc.c[i] = (rest & 1) as u8;
            rest >>= 1;
        }
        for i in (0..nb).rev() {
            dc.b[i] = (rest & 1) as u8;
            rest >>= 1;
        }
        for i in (0..na).rev() {
            dc.a[i] = (rest & 3) as u8;
            rest >>= 2;
        }
        Ok(dc)
    }

    /// Mixed-radix position: `a_1` most significant, `c` last.
    pub fn index(&self) -> usize {
        let mut idx = 0usize;
        for &v in self.a() {
            idx = idx << 2 | v as usize;
        }
        for &v in self.b().iter().chain(self.c()) {
            idx = idx << 1 | v as usize;
        }
        idx
    }

    pub fn space(&self) -> ClassSpace {
        self.space
    }

    pub fn a(&self) -> &[u8] {
        &self.a[..self.space.shape().0]
    }

    pub fn b(&self) -> &[u8] {
        &self.b[..self.space.shape().1]
    }

    pub fn c(&self) -> &[u8] {
        &self.c[..self.space.shape().2]
    }

    pub fn is_zero(&self) -> bool {
        self.a()
            .iter()
            .chain(self.b())
            .chain(self.c())
            .all(|&v| v == 0)
    }

    /// The class with every `a` exponent negated; its diagonal equals the
    /// inverse of this one up to a diagonal Clifford.
    pub fn negated(&self) -> DiagClass {
        let mut out = *self;
        for v in &mut out.a {
            *v = (4 - *v) % 4;
        }
        out
    }

    /// Embeds a restricted class into the full family.
    pub fn to_full(&self) -> DiagClass {
        if self.space == ClassSpace::Full {
            return *self;
        }
        let mut out = DiagClass {
            space: ClassSpace::Full,
            a: [0; 5],
            b: [0; 6],
            c: [0; 4],
        };
        for (i, &f) in FULL_OF_RESTRICTED_A.iter().enumerate() {
            out.a[f] = self.a[i];
        }
        for (i, &f) in FULL_OF_RESTRICTED_B.iter().enumerate() {
            out.b[f] = self.b[i];
        }
        for (i, &f) in FULL_OF_RESTRICTED_C.iter().enumerate() {
            out.c[f] = self.c[i];
        }
        out
    }

    /// The restricted class of a full class whose terms all touch the target
    /// wire, if it is one.
    pub fn to_restricted(&self) -> Option<DiagClass> {
        if self.space == ClassSpace::Restricted {
            return Some(*self);
        }
        let a: Vec<u8> = FULL_OF_RESTRICTED_A.iter().map(|&f| self.a[f]).collect();
        let b: Vec<u8> = FULL_OF_RESTRICTED_B.iter().map(|&f| self.b[f]).collect();
        let c: Vec<u8> = FULL_OF_RESTRICTED_C.iter().map(|&f| self.c[f]).collect();
        let r = DiagClass::new(ClassSpace::Restricted, &a, &b, &c).expect("in range");
        (r.to_full() == *self).then_some(r)
    }
}

impl Serialize for DiagClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiagClass", 5)?;
        st.serialize_field("a", self.a())?;
        st.serialize_field("b", self.b())?;
        st.serialize_field("c", self.c())?;
        st.serialize_field("index", &self.index())?;
        st.serialize_field("space", &self.space)?;
        st.end()
    }
}

impl fmt::Display for DiagClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u8]| v.iter().map(u8::to_string).collect::<Vec<_>>().join("");
        write!(
            f,
            "a={} b={} c={}",
            join(self.a()),
            join(self.b()),
            join(self.c())
        )
    }
}

/// All classes of the restricted family in index order.
pub fn restricted_space() -> impl Iterator<Item = DiagClass> {
    (0..ClassSpace::Restricted.size())
        .map(|i| DiagClass::from_index(ClassSpace::Restricted, i).expect("in range"))
}

/// All classes of the full family in index order.
pub fn fig2_space() -> impl Iterator<Item = DiagClass> {
    (0..ClassSpace::Full.size())
        .map(|i| DiagClass::from_index(ClassSpace::Full, i).expect("in range"))
}

/// Phases, in units of `1/8`, of the diagonal gate of a class.
fn class_phases(dc: &DiagClass) -> [u64; 16] {
    let n = SWEEP_QUBITS;
    let (ta, tb, tc) = dc.space.terms();
    let mask = |wires: &[usize]| wires.iter().fold(0usize, |m, &w| m | qubit_bit(n, w));
    let mut terms: Vec<(usize, u64)> = Vec::new();
    terms.extend(ta.iter().zip(dc.a()).map(|(w, &e)| (mask(w), 2 * e as u64)));
    terms.extend(tb.iter().zip(dc.b()).map(|(w, &e)| (mask(w), 2 * e as u64)));
    terms.extend(
        tc.iter()
            .zip(dc.c())
            .map(|(&w, &e)| (qubit_bit(n, w), e as u64)),
    );
    let mut phases = [0u64; 16];
    for (j, p) in phases.iter_mut().enumerate() {
        *p = terms
            .iter()
            .filter(|&&(m, _)| j & m == m)
            .map(|&(_, e)| e)
            .sum::<u64>()
            % PHASE_DENOM;
    }
    phases
}

/// The diagonal gate of a class.
pub fn build_diagonal(dc: &DiagClass) -> DiagonalGate {
    DiagonalGate::new(SWEEP_QUBITS, class_phases(dc).to_vec(), PHASE_DENOM).expect("valid diagonal")
}

/// The Toffoli class representative `CCX(1,2;3)` used by the sweep.
pub fn sweep_permutation() -> PermutationGate {
    PermutationGate::mcx(SWEEP_QUBITS, &[(1, true), (2, true)], 3)
}

/// `X d X d⁻¹` for the X-string with basis-index mask `x`.
pub fn x_commutator(d: &DiagonalGate, x: usize) -> DiagonalGate {
    let ph = d.phase_numerators();
    let den = d.denom();
    let phases = (0..ph.len())
        .map(|j| (ph[j ^ x] + den - ph[j]) % den)
        .collect();
    DiagonalGate::new(d.num_qubits(), phases, den).expect("valid diagonal")
}

/// Wires a permutation acts on: targets and the wires it depends on.
pub fn permutation_support(p: &PermutationGate) -> usize {
    let n = p.num_qubits();
    let mut wires = 0usize;
    for q in 0..n {
        let b = qubit_bit(n, q);
        if (0..1usize << n).any(|j| (p.apply(j) ^ j) & b != 0 || p.apply(j ^ b) != p.apply(j) ^ b) {
            wires |= 1 << q;
        }
    }
    wires
}

/// Wires a diagonal gate depends on (up to global phase).
pub fn diagonal_support(d: &DiagonalGate) -> usize {
    let n = d.num_qubits();
    let ph = d.phase_numerators();
    let mut wires = 0usize;
    for q in 0..n {
        let b = qubit_bit(n, q);
        if (0..ph.len()).any(|j| ph[j] != ph[j ^ b]) {
            wires |= 1 << q;
        }
    }
    wires
}

/// Why a class needs no check. Tags are listed in the order the filters run.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    /// Some `X d X d⁻¹` has 8th-root but not 4th-root entries (up to global
    /// phase), so no permutation conjugate of it is Clifford.
    Spectral,
    /// `d` is the `CCZ` on the wires of a Toffoli `π`, and `CCX · CCZ` is
    /// Clifford-diagonalizable.
    KnownSemiClifford,
    /// `π` and `d` together touch at most three wires, where every third-level
    /// gate is semi-Clifford.
    ThreeQubitSupport,
    /// The class with negated `a` exponents has a smaller index and the same
    /// outcome, since `π d` and `π d⁻¹` share level and semi-Cliffordness.
    InverseSymmetry,
}

impl Exclusion {
    pub fn tag(self) -> &'static str {
        match self {
            Exclusion::Spectral => "spectral",
            Exclusion::KnownSemiClifford => "known_semi_clifford",
            Exclusion::ThreeQubitSupport => "three_qubit_support",
            Exclusion::InverseSymmetry => "inverse_symmetry",
        }
    }
}

/// X-string mask witnessing the spectral obstruction for `d`, if any.
pub fn spectral_obstruction(d: &DiagonalGate) -> Option<usize> {
    (1..1usize << d.num_qubits()).find(|&x| x_commutator(d, x).denom() == 8)
}

/// Filters that depend only on the diagonal gate and the permutation.
pub fn diagonal_exclusion(d: &DiagonalGate, pi: &PermutationGate) -> Option<Exclusion> {
    if spectral_obstruction(d).is_some() {
        return Some(Exclusion::Spectral);
    }
    let n = pi.num_qubits();
    let pi_wires = permutation_support(pi);
    if pi_wires.count_ones() == 3 && pi.order() == 2 && pi.raw_cycles().len() == 1 << (n - 3) {
        let mask = (0..n)
            .filter(|&q| pi_wires >> q & 1 == 1)
            .fold(0usize, |m, q| m | qubit_bit(n, q));
        let ccz = DiagonalGate::controlled_phase(n, mask, 1, 2).expect("valid");
        if *d == ccz {
            return Some(Exclusion::KnownSemiClifford);
        }
    }
    if (pi_wires | diagonal_support(d)).count_ones() <= 3 {
        return Some(Exclusion::ThreeQubitSupport);
    }
    None
}

/// First applicable exclusion for a class, in the fixed filter order.
pub fn exclusion_filters(dc: &DiagClass, pi: &PermutationGate) -> Option<Exclusion> {
    diagonal_exclusion(&build_diagonal(dc), pi)
        .or_else(|| (dc.negated().index() < dc.index()).then_some(Exclusion::InverseSymmetry))
}

/// Third-level test for `π d` with `π` in the third level: every
/// `π X d X d⁻¹ π⁻¹` must be Clifford. Stops at the first failing X-string.
pub fn passes_ch3_test(pi: &PermutationGate, d: &DiagonalGate) -> bool {
    (1..1usize << d.num_qubits()).all(|x| {
        let e = x_commutator(d, x).conjugate_by(pi).expect("matching sizes");
        diagonal_level(&e, 2).at_most(2)
    })
}

/// What happened to one `(π, d)` pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassOutcome {
    Excluded(Exclusion),
    NotInCh3,
    SemiClifford,
    NotSemiClifford,
}

/// Runs the filters (if enabled) and the third-level test on one pair.
pub fn check_class(pi: &PermutationGate, dc: &DiagClass, filters: bool) -> ClassOutcome {
    if filters {
        if let Some(e) = exclusion_filters(dc, pi) {
            return ClassOutcome::Excluded(e);
        }
    }
    let d = build_diagonal(dc);
    if !passes_ch3_test(pi, &d) {
        return ClassOutcome::NotInCh3;
    }
    let u = pi
        .to_monomial()
        .compose(d.as_monomial())
        .expect("matching sizes");
    if is_semi_clifford(&u) {
        ClassOutcome::SemiClifford
    } else {
        ClassOutcome::NotSemiClifford
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AllSemiClifford,
    CounterexampleFound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::AllSemiClifford => "all semi-Clifford",
            Verdict::CounterexampleFound => "counterexample found",
        })
    }
}

/// A third-level gate `π d` that is not semi-Clifford.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Offender {
    pub permutation: String,
    pub class: DiagClass,
}

/// Aggregate outcome of a sweep; counts are over `(π, d)` pairs.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SweepReport {
    pub space: ClassSpace,
    pub filters: bool,
    /// Canonical cycle notation of each permutation representative.
    pub permutations: Vec<String>,
    pub classes_total: u64,
    pub classes_excluded_by: BTreeMap<String, u64>,
    pub classes_checked: u64,
    /// Checked pairs that passed the third-level test.
    pub in_ch3: u64,
    /// Of those, the semi-Clifford ones.
    pub in_ch3_semi_clifford: u64,
    pub offenders: Vec<Offender>,
    pub verdict: Verdict,
}

impl SweepReport {
    pub fn classes_excluded(&self) -> u64 {
        self.classes_excluded_by.values().sum()
    }
}

/// Checks every `(π, d)` pair, in parallel, and merges the outcomes in
/// permutation-major, class-index order.
pub fn algorithm1(
    pi_reps: &[PermutationGate],
    classes: &[DiagClass],
    filters: bool,
) -> Result<SweepReport> {
    let space = match classes.first() {
        Some(c) => c.space,
        None => ClassSpace::Restricted,
    };
    if classes.iter().any(|c| c.space != space) {
        return Err(Error::InvalidGate("classes from different families".into()));
    }
    if let Some(p) = pi_reps.iter().find(|p| p.num_qubits() != SWEEP_QUBITS) {
        return Err(Error::DimensionMismatch {
            expected: SWEEP_QUBITS,
            found: p.num_qubits(),
        });
    }
    let mut report = SweepReport {
        space,
        filters,
        permutations: pi_reps
            .iter()
            .map(|p| CycleStructure::from_permutation(p).canonical_notation())
            .collect(),
        classes_total: (pi_reps.len() * classes.len()) as u64,
        classes_excluded_by: BTreeMap::new(),
        classes_checked: 0,
        in_ch3: 0,
        in_ch3_semi_clifford: 0,
        offenders: Vec::new(),
        verdict: Verdict::AllSemiClifford,
    };
    for (pi, name) in pi_reps.iter().zip(report.permutations.clone()) {
        let outcomes: Vec<ClassOutcome> = classes
            .par_iter()
            .map(|dc| check_class(pi, dc, filters))
            .collect();
        for (dc, o) in classes.iter().zip(outcomes) {
            match o {
                ClassOutcome::Excluded(e) => {
                    *report
                        .classes_excluded_by
                        .entry(e.tag().to_string())
                        .or_default() += 1;
                    continue;
                }
                ClassOutcome::NotInCh3 => {}
                ClassOutcome::SemiClifford => {
                    report.in_ch3 += 1;
                    report.in_ch3_semi_clifford += 1;
                }
                ClassOutcome::NotSemiClifford => {
                    report.in_ch3 += 1;
                    report.offenders.push(Offender {
                        permutation: name.clone(),
                        class: *dc,
                    });
                }
            }
            report.classes_checked += 1;
        }
    }
    if !report.offenders.is_empty() {
        report.verdict = Verdict::CounterexampleFound;
    }
    Ok(report)
}

/// Sweep options for [`sweep_ch3`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SweepOptions {
    pub space: ClassSpace,
    pub filters: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            space: ClassSpace::Restricted,
            filters: true,
        }
    }
}

/// The 4-qubit sweep with the Toffoli representative.
pub fn sweep_ch3(opts: SweepOptions) -> Result<SweepReport> {
    let classes: Vec<DiagClass> = match opts.space {
        ClassSpace::Restricted => restricted_space().collect(),
        ClassSpace::Full => fig2_space().collect(),
    };
    algorithm1(&[sweep_permutation()], &classes, opts.filters)
}
