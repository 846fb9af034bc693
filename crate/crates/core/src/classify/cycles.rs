//! Classes of cycle structures under conjugation by affine permutations.
//!
//! Two routes are implemented. The direct route enumerates every structure of
//! a shape and splits them into orbits by breadth-first search. The frame
//! route maps a structure to coordinates relative to an affine frame drawn
//! from its own points and keeps the smallest encoding over all frames; two
//! structures are conjugate exactly when these forms agree, and the form does
//! not depend on the number of qubits. The frame route cross-checks the direct
//! one and drives [`extend_classification`].

use std::collections::{BTreeMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{CycleStructure, PermutationGate};
use crate::hierarchy::{default_cap, is_semi_clifford, LevelOracle, LevelVerdict};

use super::profile::{profile_with_level, AeProfile, Spectrum};
use super::two_sided::{affine_group, two_sided_canonical_with, MAX_TWO_SIDED_QUBITS};
use super::{affine_generators, EquivalenceAction};

/// Most non-fixed points a structure may have in this module.
pub const MAX_POINTS: usize = 8;
/// Most non-fixed points for a table cell.
pub const MAX_TABLE_POINTS: usize = 6;
/// Most qubits for the direct orbit enumeration.
pub const MAX_DIRECT_QUBITS: usize = 4;
/// Most qubits any structure here may live on.
pub const MAX_QUBITS: usize = 6;

const POINT_BITS: u32 = 6;

/// A cycle structure packed into fixed arrays, kept canonical.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Packed {
    pts: [u8; MAX_POINTS],
    lens: [u8; MAX_POINTS],
    ncyc: u8,
    k: u8,
}

impl Packed {
    fn empty() -> Self {
        Packed {
            pts: [0; MAX_POINTS],
            lens: [0; MAX_POINTS],
            ncyc: 0,
            k: 0,
        }
    }

    fn from_cycles(cycles: &[Vec<u32>]) -> Self {
        let mut p = Packed::empty();
        for c in cycles {
            p.lens[p.ncyc as usize] = c.len() as u8;
            p.ncyc += 1;
            for &s in c {
                p.pts[p.k as usize] = s as u8;
                p.k += 1;
            }
        }
        p.canonicalize();
        p
    }

    fn to_cycles(self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.ncyc as usize);
        let mut off = 0;
        for &l in &self.lens[..self.ncyc as usize] {
            let l = l as usize;
            out.push(self.pts[off..off + l].iter().map(|&s| s as u32).collect());
            off += l;
        }
        out
    }

    fn points(&self) -> &[u8] {
        &self.pts[..self.k as usize]
    }

    fn canonicalize(&mut self) {
        let nc = self.ncyc as usize;
        let mut starts = [0usize; MAX_POINTS];
        let mut off = 0;
        for (start, &len) in starts.iter_mut().zip(&self.lens).take(nc) {
            *start = off;
            let l = len as usize;
            let seg = &mut self.pts[off..off + l];
            let arg = (0..l).max_by_key(|&i| seg[i]).expect("non-empty cycle");
            seg.rotate_left(arg);
            off += l;
        }
        let mut order = [0usize; MAX_POINTS];
        for (c, o) in order.iter_mut().enumerate().take(nc) {
            *o = c;
        }
        order[..nc].sort_unstable_by(|&a, &b| self.pts[starts[b]].cmp(&self.pts[starts[a]]));
        let old = *self;
        let mut off = 0;
        for (slot, &c) in order[..nc].iter().enumerate() {
            let l = old.lens[c] as usize;
            self.lens[slot] = l as u8;
            self.pts[off..off + l].copy_from_slice(&old.pts[starts[c]..starts[c] + l]);
            off += l;
        }
    }

    fn map(&self, f: impl Fn(u8) -> u8) -> Packed {
        let mut p = *self;
        for s in &mut p.pts[..p.k as usize] {
            *s = f(*s);
        }
        p.canonicalize();
        p
    }

    fn encode(&self) -> u64 {
        let mut code = 0u64;
        let mut off = 0;
        for &l in &self.lens[..self.ncyc as usize] {
            code = (code << 3) | (l as u64 - 1);
            for &s in &self.pts[off..off + l as usize] {
                code = (code << POINT_BITS) | s as u64;
            }
            off += l as usize;
        }
        code
    }
}

/// Cycle lengths sorted descending; empty for the identity.
pub fn normalize_shape(shape: &[usize]) -> Result<Vec<usize>> {
    if shape.iter().any(|&l| l < 2) {
        return Err(Error::OutOfRange(format!(
            "cycle lengths must be >= 2, got {shape:?}"
        )));
    }
    let total: usize = shape.iter().sum();
    if total > MAX_POINTS {
        return Err(Error::GuardExceeded(format!(
            "shape {shape:?} moves {total} points; at most {MAX_POINTS} supported"
        )));
    }
    let mut s = shape.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    Ok(s)
}

/// Renders a shape as `(4,2)`, or `Id` for the identity.
pub fn shape_label(shape: &[usize]) -> String {
    if shape.is_empty() {
        return "Id".to_string();
    }
    let inner: Vec<String> = shape.iter().map(|l| l.to_string()).collect();
    format!("({})", inner.join(","))
}

/// Number of distinct cycle structures of `shape` on `n` qubits.
pub fn count_structures(n: usize, shape: &[usize]) -> u128 {
    let dim = 1u128 << n;
    let k: usize = shape.iter().sum();
    if k as u128 > dim {
        return 0;
    }
    let mut num: u128 = 1;
    for i in 0..k as u128 {
        num *= dim - i;
    }
    let mut den: u128 = shape.iter().map(|&l| l as u128).product();
    let mut mult: BTreeMap<usize, u128> = BTreeMap::new();
    for &l in shape {
        *mult.entry(l).or_default() += 1;
    }
    for &m in mult.values() {
        den *= (1..=m).product::<u128>();
    }
    num / den
}

/// Calls `f` once for every canonical structure of `shape` whose points lie in
/// `allowed` (a bit set over basis states).
fn enumerate_structures(shape: &[usize], allowed: u64, f: &mut impl FnMut(&Packed)) {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in shape {
        *counts.entry(l).or_default() += 1;
    }
    let lengths: Vec<usize> = counts.keys().copied().collect();
    let mut remaining: Vec<usize> = lengths.iter().map(|l| counts[l]).collect();
    let bound = 64 - allowed.leading_zeros() as usize;
    let mut cur = Packed::empty();
    place_cycle(&lengths, &mut remaining, bound, allowed, &mut cur, f);
}

fn place_cycle(
    lengths: &[usize],
    remaining: &mut [usize],
    bound: usize,
    free: u64,
    cur: &mut Packed,
    f: &mut impl FnMut(&Packed),
) {
    if remaining.iter().all(|&r| r == 0) {
        f(cur);
        return;
    }
    for leader in (0..bound).rev() {
        if free >> leader & 1 == 0 {
            continue;
        }
        for li in 0..lengths.len() {
            if remaining[li] == 0 {
                continue;
            }
            remaining[li] -= 1;
            let l = lengths[li];
            let save = *cur;
            cur.lens[cur.ncyc as usize] = l as u8;
            cur.ncyc += 1;
            cur.pts[cur.k as usize] = leader as u8;
            cur.k += 1;
            let below = free & ((1u64 << leader) - 1);
            fill_members(
                lengths,
                remaining,
                leader,
                free & !(1u64 << leader),
                below,
                l - 1,
                cur,
                f,
            );
            *cur = save;
            remaining[li] += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn fill_members(
    lengths: &[usize],
    remaining: &mut [usize],
    leader: usize,
    free: u64,
    below: u64,
    left: usize,
    cur: &mut Packed,
    f: &mut impl FnMut(&Packed),
) {
    if left == 0 {
        place_cycle(lengths, remaining, leader, free, cur, f);
        return;
    }
    let mut cand = below;
    while cand != 0 {
        let s = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        cur.pts[cur.k as usize] = s as u8;
        cur.k += 1;
        let bit = 1u64 << s;
        fill_members(
            lengths,
            remaining,
            leader,
            free & !bit,
            below & !bit,
            left - 1,
            cur,
            f,
        );
        cur.k -= 1;
    }
}

/// Affine-frame canonical form: the dimension of the affine span and the
/// smallest encoding over all frames chosen from the structure's points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct AffineKey {
    pub span_dim: u8,
    pub code: u64,
}

fn rank_of(vectors: impl Iterator<Item = u32>) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for v in vectors {
        let r = basis.iter().fold(v, |acc, &b| acc.min(acc ^ b));
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn affine_canonical(p: &Packed) -> (AffineKey, Packed) {
    let pts = p.points();
    if pts.is_empty() {
        return (
            AffineKey {
                span_dim: 0,
                code: 0,
            },
            *p,
        );
    }
    let p0 = pts[0];
    let d = rank_of(pts.iter().map(|&s| (s ^ p0) as u32));
    let mut best: Option<(u64, Packed)> = None;
    for &origin in pts {
        let diffs: Vec<u8> = pts
            .iter()
            .filter(|&&s| s != origin)
            .map(|&s| s ^ origin)
            .collect();
        let mut basis: Vec<u8> = Vec::with_capacity(d);
        frames(&diffs, d, &mut basis, 1u64, &mut |basis| {
            let mut coord = [0u8; 64];
            for c in 0..(1usize << d) {
                let mut v = 0u8;
                for (i, &b) in basis.iter().enumerate() {
                    if c >> (d - 1 - i) & 1 == 1 {
                        v ^= b;
                    }
                }
                coord[v as usize] = c as u8;
            }
            let mapped = p.map(|s| coord[(s ^ origin) as usize]);
            let code = mapped.encode();
            if best.is_none_or(|(b, _)| code < b) {
                best = Some((code, mapped));
            }
        });
    }
    let (code, rep) = best.expect("at least one frame");
    (
        AffineKey {
            span_dim: d as u8,
            code,
        },
        rep,
    )
}

/// Calls `f` with every ordered basis of the span of `diffs` drawn from
/// `diffs`. `span` is the bit set of vectors spanned so far.
fn frames(diffs: &[u8], d: usize, basis: &mut Vec<u8>, span: u64, f: &mut impl FnMut(&[u8])) {
    if basis.len() == d {
        f(basis);
        return;
    }
    for &v in diffs {
        if span >> v & 1 == 1 {
            continue;
        }
        let mut next = span;
        let mut s = span;
        while s != 0 {
            let w = s.trailing_zeros() as u8;
            s &= s - 1;
            next |= 1u64 << (w ^ v);
        }
        basis.push(v);
        frames(diffs, d, basis, next, f);
        basis.pop();
    }
}

/// Affine canonical key of a cycle structure.
pub fn affine_key(cs: &CycleStructure) -> Result<AffineKey> {
    check_size(cs.num_qubits(), cs.num_points())?;
    Ok(affine_canonical(&Packed::from_cycles(cs.cycles())).0)
}

/// Canonical representative of the class of `cs`: frame coordinates placed on
/// the last qubits, so leading qubits are constant 0.
pub fn canonical_representative(cs: &CycleStructure) -> Result<CycleStructure> {
    check_size(cs.num_qubits(), cs.num_points())?;
    let (_, rep) = affine_canonical(&Packed::from_cycles(cs.cycles()));
    CycleStructure::new(cs.num_qubits(), rep.to_cycles())
}

fn check_size(n: usize, k: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::GuardExceeded(format!(
            "at most {MAX_QUBITS} qubits supported, got {n}"
        )));
    }
    if k > MAX_POINTS {
        return Err(Error::GuardExceeded(format!(
            "at most {MAX_POINTS} points supported, got {k}"
        )));
    }
    Ok(())
}

/// How a class's CH membership was settled.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChBasis {
    /// Level computed on the representative.
    Direct,
    /// Controlled gate whose target permutation is not in CH.
    ControlledNotInCh,
    /// Controlled gate whose order is not a power of two.
    OrderNotPowerOfTwo,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationMethod {
    OrbitBfs,
    Extension,
}

/// One class of a table cell.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleClassRecord {
    pub representative_cycles: Vec<Vec<u32>>,
    pub notation: String,
    pub order: u64,
    pub span_dim: usize,
    pub key: AffineKey,
    /// Number of structures in the class, when the orbit was enumerated.
    pub orbit_size: Option<u64>,
    pub level: LevelVerdict,
    pub in_ch: bool,
    pub ch_basis: ChBasis,
    pub semi_clifford: Option<bool>,
    pub ddt_spectrum: Spectrum,
    pub lat_spectrum: Spectrum,
    /// Degree histograms of the components of the permutation and its inverse.
    pub degrees: (Spectrum, Spectrum),
    /// Index of the two-sided affine class within the cell.
    pub two_sided_class: usize,
}

impl CycleClassRecord {
    pub fn representative(&self, n: usize) -> CycleStructure {
        CycleStructure::new(n, self.representative_cycles.clone())
            .expect("stored representative is valid")
    }
}

/// How the two-sided grouping of a cell was decided.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoSidedMethod {
    /// Exact canonical forms under left and right affine action.
    CanonicalForm,
    /// Two permutations moving `s1` and `s2` points with `s1 + s2 < 2^(n-1)`
    /// are two-sided equivalent only if conjugate: `L P2 R = P1` forces `L`
    /// to agree with `R^-1` on more than half the states, hence everywhere.
    SupportBound,
    /// Classes kept apart; equal invariant profiles are listed as unresolved.
    Invariants,
}

/// All classes of one `(n, shape)` cell.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleClassification {
    pub n: usize,
    pub shape: Vec<usize>,
    pub action: EquivalenceAction,
    pub method: ClassificationMethod,
    pub cap: u32,
    /// Structures enumerated by the direct route.
    pub total_structures: Option<u64>,
    /// How conjugation classes were merged into two-sided classes.
    pub two_sided_method: TwoSidedMethod,
    /// Pairs of classes whose two-sided distinctness could not be certified.
    pub unresolved_pairs: Vec<(String, String)>,
    /// Conjugation classes, sorted by canonical notation.
    pub classes: Vec<CycleClassRecord>,
}

impl CycleClassification {
    /// Number of conjugation classes.
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_in_ch(&self) -> usize {
        self.classes.iter().filter(|c| c.in_ch).count()
    }

    /// Number of two-sided affine classes meeting this shape.
    pub fn num_two_sided(&self) -> usize {
        self.classes
            .iter()
            .map(|c| c.two_sided_class + 1)
            .max()
            .unwrap_or(0)
    }

    /// Two-sided classes in CH. Levels are two-sided invariants, so any member
    /// decides its class.
    pub fn num_two_sided_in_ch(&self) -> usize {
        let ids: HashSet<usize> = self
            .classes
            .iter()
            .filter(|c| c.in_ch)
            .map(|c| c.two_sided_class)
            .collect();
        ids.len()
    }

    /// Table cell text: two-sided classes in CH over two-sided classes, or
    /// `0` for an empty cell.
    pub fn cell(&self) -> String {
        if self.classes.is_empty() {
            "0".to_string()
        } else {
            format!("{}/{}", self.num_two_sided_in_ch(), self.num_two_sided())
        }
    }

    /// The same cell counted by conjugation classes.
    pub fn conjugation_cell(&self) -> String {
        if self.classes.is_empty() {
            "0".to_string()
        } else {
            format!("{}/{}", self.num_in_ch(), self.num_classes())
        }
    }
}

/// Options for building class records.
#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Level cap; `None` uses the default for the qubit count.
    pub cap: Option<u32>,
    /// Compute semi-Cliffordness of each representative.
    pub semi_clifford: bool,
    /// In extensions, settle controlled classes by the control theorems
    /// instead of computing their level.
    pub use_control_theorems: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            cap: None,
            semi_clifford: true,
            use_control_theorems: true,
        }
    }
}

struct Pending {
    key: AffineKey,
    rep: Packed,
    orbit_size: Option<u64>,
    inherited: Option<ChBasis>,
}

struct Built {
    record: CycleClassRecord,
    profile: AeProfile,
    two_sided_key: Option<Vec<u32>>,
}

fn build_records(n: usize, pending: Vec<Pending>, cap: u32, opts: &ClassifyOptions) -> Vec<Built> {
    let group = (n <= MAX_TWO_SIDED_QUBITS).then(|| affine_group(n).expect("small affine group"));
    let mut built: Vec<Built> = pending
        .into_par_iter()
        .map_init(LevelOracle::new, |oracle, p| {
            let cs = CycleStructure::new(n, p.rep.to_cycles()).expect("canonical structure");
            let perm = cs.to_permutation();
            let m = perm.to_monomial();
            let (level, basis) = match p.inherited {
                Some(b) => (LevelVerdict::NotInChUpTo(cap), b),
                None => (oracle.level(&m, cap), ChBasis::Direct),
            };
            let profile = profile_with_level(&perm, EquivalenceAction::Conjugation, level);
            let record = CycleClassRecord {
                representative_cycles: cs.cycles().to_vec(),
                notation: cs.canonical_notation(),
                order: cs.order(),
                span_dim: p.key.span_dim as usize,
                key: p.key,
                orbit_size: p.orbit_size,
                level,
                in_ch: level.in_ch(),
                ch_basis: basis,
                semi_clifford: opts.semi_clifford.then(|| is_semi_clifford(&m)),
                ddt_spectrum: profile.ddt_spectrum.clone(),
                lat_spectrum: profile.lat_spectrum.clone(),
                degrees: profile.degrees.clone(),
                two_sided_class: 0,
            };
            Built {
                record,
                two_sided_key: group.as_ref().map(|g| two_sided_canonical_with(&perm, g)),
                profile,
            }
        })
        .collect();
    built.sort_by(|a, b| a.record.notation.cmp(&b.record.notation));
    built
}

/// Groups the conjugation classes of a cell into two-sided classes.
fn finish(
    n: usize,
    shape: Vec<usize>,
    method: ClassificationMethod,
    cap: u32,
    total_structures: Option<u64>,
    built: Vec<Built>,
) -> CycleClassification {
    let mut unresolved_pairs = Vec::new();
    let points: usize = shape.iter().sum();
    let two_sided_method = if built.iter().all(|b| b.two_sided_key.is_some()) {
        TwoSidedMethod::CanonicalForm
    } else if n >= 1 && 2 * points < 1usize << (n - 1) {
        TwoSidedMethod::SupportBound
    } else {
        TwoSidedMethod::Invariants
    };
    let mut keys: Vec<Vec<u32>> = Vec::new();
    let mut classes = Vec::with_capacity(built.len());
    for (i, b) in built.iter().enumerate() {
        let mut rec = b.record.clone();
        rec.two_sided_class = match two_sided_method {
            TwoSidedMethod::CanonicalForm => {
                let key = b.two_sided_key.clone().expect("exact keys");
                match keys.iter().position(|k| *k == key) {
                    Some(pos) => pos,
                    None => {
                        keys.push(key);
                        keys.len() - 1
                    }
                }
            }
            TwoSidedMethod::SupportBound => i,
            TwoSidedMethod::Invariants => {
                for other in &built[..i] {
                    if other.profile == b.profile {
                        unresolved_pairs
                            .push((other.record.notation.clone(), b.record.notation.clone()));
                    }
                }
                i
            }
        };
        classes.push(rec);
    }
    CycleClassification {
        n,
        shape,
        action: EquivalenceAction::Conjugation,
        method,
        cap,
        total_structures,
        two_sided_method,
        unresolved_pairs,
        classes,
    }
}

/// Direct classification of one cell by orbit enumeration.
pub fn classify_cycle_structures(n: usize, shape: &[usize]) -> Result<CycleClassification> {
    classify_cycle_structures_with(n, shape, &ClassifyOptions::default())
}

pub fn classify_cycle_structures_with(
    n: usize,
    shape: &[usize],
    opts: &ClassifyOptions,
) -> Result<CycleClassification> {
    let shape = normalize_shape(shape)?;
    let k: usize = shape.iter().sum();
    if k > MAX_TABLE_POINTS {
        return Err(Error::GuardExceeded(format!(
            "shape {} moves {k} points; direct classification supports at most {MAX_TABLE_POINTS}",
            shape_label(&shape)
        )));
    }
    if n == 0 || n > MAX_DIRECT_QUBITS {
        return Err(Error::GuardExceeded(format!(
            "direct classification needs 1 <= n <= {MAX_DIRECT_QUBITS}, got {n}"
        )));
    }
    let cap = opts.cap.unwrap_or_else(|| default_cap(n));
    let dim = 1usize << n;
    let gens: Vec<Vec<u8>> = affine_generators(n)
        .iter()
        .map(|g| g.table().iter().map(|&v| v as u8).collect())
        .collect();
    let allowed = if dim == 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    };
    let mut all: Vec<Packed> = Vec::new();
    enumerate_structures(&shape, allowed, &mut |p| all.push(*p));
    let mut seen: HashSet<u64> = HashSet::with_capacity(all.len());
    let mut pending = Vec::new();
    for start in &all {
        if !seen.insert(start.encode()) {
            continue;
        }
        let mut size = 1u64;
        let mut queue = VecDeque::from([*start]);
        while let Some(cur) = queue.pop_front() {
            for g in &gens {
                let next = cur.map(|s| g[s as usize]);
                if seen.insert(next.encode()) {
                    size += 1;
                    queue.push_back(next);
                }
            }
        }
        let (key, rep) = affine_canonical(start);
        pending.push(Pending {
            key,
            rep,
            orbit_size: Some(size),
            inherited: None,
        });
    }
    let distinct: HashSet<AffineKey> = pending.iter().map(|p| p.key).collect();
    if distinct.len() != pending.len() {
        return Err(Error::Verification(format!(
            "orbit search found {} classes but frame forms give {}",
            pending.len(),
            distinct.len()
        )));
    }
    let built = build_records(n, pending, cap, opts);
    Ok(finish(
        n,
        shape,
        ClassificationMethod::OrbitBfs,
        cap,
        Some(all.len() as u64),
        built,
    ))
}

/// Classes on `n + 1` qubits from the classes on `n` qubits.
///
/// Every class on `n` qubits reappears with a constant leading qubit, which
/// makes it a controlled gate. The only other classes are those whose points
/// span all of `F_2^{n+1}`; they are found by placing the structure on the
/// standard frame `0, e_1, …, e_{n+1}` plus any further points.
pub fn extend_classification(
    prev: &CycleClassification,
    opts: &ClassifyOptions,
) -> Result<CycleClassification> {
    let n1 = prev.n + 1;
    let k: usize = prev.shape.iter().sum();
    check_size(n1, k)?;
    let cap = opts.cap.unwrap_or_else(|| default_cap(n1));
    let mut pending: Vec<Pending> = Vec::new();
    for rec in &prev.classes {
        let packed = Packed::from_cycles(&rec.representative_cycles);
        let (key, rep) = affine_canonical(&packed);
        let inherited = if !opts.use_control_theorems {
            None
        } else if !rec.in_ch {
            Some(ChBasis::ControlledNotInCh)
        } else if !rec.order.is_power_of_two() {
            Some(ChBasis::OrderNotPowerOfTwo)
        } else {
            None
        };
        pending.push(Pending {
            key,
            rep,
            orbit_size: None,
            inherited,
        });
    }
    if k > n1 {
        let dim = 1usize << n1;
        let frame: u64 = 1 | (0..n1).fold(0u64, |acc, i| acc | 1u64 << (1usize << i));
        let others: Vec<usize> = (0..dim).filter(|&s| frame >> s & 1 == 0).collect();
        let mut found: BTreeMap<AffineKey, Packed> = BTreeMap::new();
        for_each_subset(&others, k - (n1 + 1), &mut |extra| {
            let allowed = extra.iter().fold(frame, |acc, &s| acc | 1u64 << s);
            enumerate_structures(&prev.shape, allowed, &mut |p| {
                let (key, rep) = affine_canonical(p);
                if key.span_dim as usize == n1 {
                    found.entry(key).or_insert(rep);
                }
            });
        });
        for (key, rep) in found {
            pending.push(Pending {
                key,
                rep,
                orbit_size: None,
                inherited: None,
            });
        }
    }
    let distinct: HashSet<AffineKey> = pending.iter().map(|p| p.key).collect();
    if distinct.len() != pending.len() {
        return Err(Error::Verification(
            "extension produced duplicate classes".into(),
        ));
    }
    let built = build_records(n1, pending, cap, opts);
    Ok(finish(
        n1,
        prev.shape.clone(),
        ClassificationMethod::Extension,
        cap,
        None,
        built,
    ))
}

fn for_each_subset(items: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(
        items: &[usize],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut Vec::with_capacity(size), f);
}

/// Permutation of a class representative.
pub fn representative_permutation(n: usize, rec: &CycleClassRecord) -> PermutationGate {
    rec.representative(n).to_permutation()
}

/// Every structure of `shape` on `n` qubits, in enumeration order.
pub fn all_structures(n: usize, shape: &[usize]) -> Result<Vec<CycleStructure>> {
    let shape = normalize_shape(shape)?;
    check_size(n, shape.iter().sum())?;
    let dim = 1usize << n;
    let allowed = if dim == 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    };
    let mut out = Vec::new();
    enumerate_structures(&shape, allowed, &mut |p| {
        out.push(CycleStructure::new(n, p.to_cycles()).expect("valid structure"));
    });
    Ok(out)
}

/// The shapes of the classification table, identity first.
pub fn table_shapes() -> Vec<Vec<usize>> {
    vec![
        vec![],
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![5],
        vec![3, 2],
        vec![6],
        vec![4, 2],
        vec![3, 3],
        vec![2, 2, 2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_match_formula() {
        for n in 1..=3 {
            for shape in table_shapes() {
                let got = all_structures(n, &shape).unwrap();
                assert_eq!(
                    got.len() as u128,
                    count_structures(n, &shape),
                    "n={n} {shape:?}"
                );
                let distinct: HashSet<_> = got.iter().collect();
                assert_eq!(distinct.len(), got.len());
            }
        }
    }

    #[test]
    fn packed_round_trip() {
        let cs = CycleStructure::new(4, vec![vec![1, 2, 3], vec![7, 8], vec![5, 15]]).unwrap();
        let p = Packed::from_cycles(cs.cycles());
        assert_eq!(p.to_cycles(), cs.cycles());
    }

    #[test]
    fn small_cells() {
        let c = classify_cycle_structures(3, &[2]).unwrap();
        assert_eq!(c.cell(), "1/1");
        let c = classify_cycle_structures(1, &[3]).unwrap();
        assert_eq!(c.cell(), "0");
        let c = classify_cycle_structures(3, &[4]).unwrap();
        assert_eq!(c.cell(), "1/2");
        assert!(classify_cycle_structures(3, &[4, 3]).is_err());
    }

    #[test]
    fn frame_key_is_conjugation_invariant() {
        let cs = CycleStructure::new(3, vec![vec![7, 6, 1], vec![4, 2]]).unwrap();
        let key = affine_key(&cs).unwrap();
        for g in affine_generators(3) {
            let moved = cs.map_states(|s| g.apply(s as usize) as u32);
            assert_eq!(affine_key(&moved).unwrap(), key);
        }
        let rep = canonical_representative(&cs).unwrap();
        assert_eq!(affine_key(&rep).unwrap(), key);
    }

    #[test]
    fn three_qubit_six_point_cells_merge_two_sided() {
        for shape in [vec![6], vec![4, 2], vec![3, 3], vec![2, 2, 2]] {
            let c = classify_cycle_structures(3, &shape).unwrap();
            assert_eq!(c.two_sided_method, TwoSidedMethod::CanonicalForm);
            assert_eq!(c.cell(), "1/2", "{shape:?}");
            assert!(c.num_classes() > c.num_two_sided());
        }
        assert_eq!(
            classify_cycle_structures(3, &[6])
                .unwrap()
                .conjugation_cell(),
            "2/5"
        );
    }

    #[test]
    fn support_bound_agrees_with_canonical_forms() {
        // On four qubits shapes moving at most three points satisfy the bound,
        // so conjugation and two-sided counts must coincide.
        for shape in [vec![], vec![2], vec![3]] {
            let c = classify_cycle_structures(4, &shape).unwrap();
            assert_eq!(c.num_two_sided(), c.num_classes(), "{shape:?}");
        }
    }

    #[test]
    fn extension_to_five_qubits_uses_support_bound() {
        let c4 = classify_cycle_structures(4, &[3, 2]).unwrap();
        let c5 = extend_classification(&c4, &ClassifyOptions::default()).unwrap();
        assert_eq!(c5.two_sided_method, TwoSidedMethod::SupportBound);
        assert!(c5.unresolved_pairs.is_empty());
        assert_eq!(c5.cell(), "0/3");
    }
}
