//! Exact canonical forms under two-sided affine equivalence `P ↦ L P R`.

use crate::error::{Error, Result};
use crate::gates::PermutationGate;

/// Most qubits for which the affine group is enumerated.
pub const MAX_TWO_SIDED_QUBITS: usize = 4;

/// Truth tables of every affine permutation `x ↦ Ax ⊕ b` on `n` qubits.
pub fn affine_group(n: usize) -> Result<Vec<Vec<u8>>> {
    if n == 0 || n > MAX_TWO_SIDED_QUBITS {
        return Err(Error::GuardExceeded(format!(
            "affine group enumeration needs 1 <= n <= {MAX_TWO_SIDED_QUBITS}, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut linear: Vec<Vec<u8>> = Vec::new();
    // Images of the basis states 1, 2, 4, ... chosen independently.
    let mut images: Vec<u8> = Vec::with_capacity(n);
    fn rec(n: usize, dim: usize, images: &mut Vec<u8>, span: u64, out: &mut Vec<Vec<u8>>) {
        if images.len() == n {
            let table = (0..dim)
                .map(|x| {
                    (0..n)
                        .filter(|&i| x >> i & 1 == 1)
                        .fold(0u8, |acc, i| acc ^ images[i])
                })
                .collect();
            out.push(table);
            return;
        }
        for v in 1..dim as u8 {
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
            images.push(v);
            rec(n, dim, images, next, out);
            images.pop();
        }
    }
    rec(n, dim, &mut images, 1, &mut linear);
    let mut group = Vec::with_capacity(linear.len() * dim);
    for t in &linear {
        for b in 0..dim as u8 {
            group.push(t.iter().map(|&v| v ^ b).collect());
        }
    }
    Ok(group)
}

/// Lexicographically smallest `L ∘ q` over affine `L`. `L` is forced: it maps
/// the first affine frame met among the values of `q` to `0, 1, 2, 4, …`.
fn left_canonical(q: &[u8], out: &mut [u8]) {
    // coord[v] holds the image of v once v lies in the span of the frame.
    let mut coord = [u8::MAX; 64];
    let mut frame: Vec<(u8, u8)> = Vec::new();
    let mut origin = 0u8;
    for (x, &v) in q.iter().enumerate() {
        if x == 0 {
            origin = v;
            coord[v as usize] = 0;
            out[0] = 0;
            continue;
        }
        if coord[v as usize] == u8::MAX {
            let img = 1u8 << frame.len();
            let dir = v ^ origin;
            frame.push((dir, img));
            let mut spanned: Vec<(u8, u8)> = Vec::new();
            for (w, &c) in coord.iter().enumerate() {
                if c != u8::MAX {
                    spanned.push((w as u8 ^ dir, c ^ img));
                }
            }
            for (w, c) in spanned {
                coord[w as usize] = c;
            }
        }
        out[x] = coord[v as usize];
    }
}

/// Smallest truth table in the two-sided affine class of `p`.
pub fn two_sided_canonical(p: &PermutationGate) -> Result<Vec<u32>> {
    let group = affine_group(p.num_qubits())?;
    Ok(two_sided_canonical_with(p, &group))
}

/// As [`two_sided_canonical`], reusing a precomputed [`affine_group`].
pub fn two_sided_canonical_with(p: &PermutationGate, group: &[Vec<u8>]) -> Vec<u32> {
    let t: Vec<u8> = p.table().iter().map(|&v| v as u8).collect();
    let dim = t.len();
    let mut best = vec![u8::MAX; dim];
    let mut composed = vec![0u8; dim];
    let mut cand = vec![0u8; dim];
    for r in group {
        for x in 0..dim {
            composed[x] = t[r[x] as usize];
        }
        left_canonical(&composed, &mut cand);
        if cand < best {
            best.copy_from_slice(&cand);
        }
    }
    best.into_iter().map(u32::from).collect()
}
