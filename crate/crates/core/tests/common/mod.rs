#![allow(dead_code)]

use std::f64::consts::PI;

use cliffhier::classify::affine_generators;
use cliffhier::monomial::MonomialOperator;
use cliffhier::{Circuit, CircuitGate, DiagonalGate, PauliString, PermutationGate};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<Complex64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense(m: &MonomialOperator) -> Dense {
    let dim = m.dim();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    let den = m.denom() as f64;
    for j in 0..dim {
        let theta = 2.0 * PI * m.phase_numerators()[j] as f64 / den;
        out[m.perm()[j] as usize][j] = Complex64::from_polar(1.0, theta);
    }
    out
}

/// `i^p X^x Z^z` built entry by entry from its definition.
pub fn dense_pauli(p: &PauliString) -> Dense {
    let n = p.num_qubits();
    let dim = 1usize << n;
    let one = Complex64::new(1.0, 0.0);
    let x = [
        [Complex64::new(0.0, 0.0), one],
        [one, Complex64::new(0.0, 0.0)],
    ];
    let z = [
        [one, Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), -one],
    ];
    let eye = [
        [one, Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), one],
    ];
    let mut out = vec![vec![one]];
    for q in 0..n {
        let xs = if p.x().get(q) { x } else { eye };
        let zs = if p.z().get(q) { z } else { eye };
        let mut factor = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in factor.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..2).map(|k| xs[r][k] * zs[k][c]).sum();
            }
        }
        out = kron(&out, &factor);
    }
    let phase = Complex64::new(0.0, 1.0).powu(p.phase_i_power() as u32);
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= phase;
        }
    }
    assert_eq!(out.len(), dim);
    out
}

fn kron(a: &Dense, b: &[[Complex64; 2]; 2]) -> Dense {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            for r in 0..2 {
                for c in 0..2 {
                    out[2 * i + r][2 * j + c] = a[i][j] * b[r][c];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint(a: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].conj()).collect())
        .collect()
}

pub fn approx_eq(a: &Dense, b: &Dense) -> bool {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| (x - y).norm() < 1e-9)
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> PermutationGate {
    let mut table: Vec<u32> = (0..1u32 << n).collect();
    table.shuffle(rng);
    PermutationGate::new(n, table).unwrap()
}

pub fn random_affine(n: usize, rng: &mut impl Rng) -> PermutationGate {
    let gens = affine_generators(n);
    let mut p = PermutationGate::identity(n);
    for _ in 0..4 * n * n + 4 {
        p = gens.choose(rng).unwrap().compose(&p).unwrap();
    }
    p
}

/// Entries `exp(2πi·r_j/2^log_den)` with uniform `r_j`.
pub fn random_diagonal(n: usize, log_den: u32, rng: &mut impl Rng) -> DiagonalGate {
    let den = 1u64 << log_den;
    let phases = (0..1usize << n).map(|_| rng.gen_range(0..den)).collect();
    DiagonalGate::new(n, phases, den).unwrap()
}

pub fn random_monomial(n: usize, log_den: u32, rng: &mut impl Rng) -> MonomialOperator {
    let p = random_permutation(n, rng).to_monomial();
    p.compose(random_diagonal(n, log_den, rng).as_monomial())
        .unwrap()
}

pub fn random_gate(n: usize, rng: &mut impl Rng) -> CircuitGate {
    let target = rng.gen_range(0..n);
    let mut controls = Vec::new();
    for w in (0..n).filter(|&w| w != target) {
        if rng.gen_bool(0.5) {
            controls.push((w, rng.gen_bool(0.7)));
        }
    }
    CircuitGate::new(target, controls).unwrap()
}

pub fn random_circuit(n: usize, len: usize, rng: &mut impl Rng) -> Circuit {
    Circuit::new(n, (0..len).map(|_| random_gate(n, rng)).collect()).unwrap()
}

/// A circuit whose wires each carry only targets or only controls, apart
/// from bare X gates.
pub fn random_zero_mismatch_circuit(n: usize, rng: &mut impl Rng) -> Circuit {
    loop {
        let targets: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let t_wires: Vec<usize> = (0..n).filter(|&w| targets[w]).collect();
        let c_wires: Vec<usize> = (0..n).filter(|&w| !targets[w]).collect();
        if t_wires.is_empty() {
            continue;
        }
        let len = rng.gen_range(1..=6);
        let mut gates = Vec::new();
        for _ in 0..len {
            if rng.gen_bool(0.15) {
                gates.push(CircuitGate::x(rng.gen_range(0..n)));
                continue;
            }
            let t = *t_wires.choose(rng).unwrap();
            let mut controls = Vec::new();
            for &w in &c_wires {
                if rng.gen_bool(0.6) {
                    controls.push((w, rng.gen_bool(0.7)));
                }
            }
            gates.push(CircuitGate::new(t, controls).unwrap());
        }
        return Circuit::new(n, gates).unwrap();
    }
}

/// A random circuit in which only wire `m` may carry both targets and
/// controls: the other wires are split into target-only and control-only.
pub fn random_low_mismatch_circuit(n: usize, rng: &mut impl Rng) -> Circuit {
    let m = rng.gen_range(0..n);
    let others: Vec<usize> = (0..n).filter(|&w| w != m).collect();
    let (mut t_wires, mut c_wires): (Vec<usize>, Vec<usize>) =
        others.iter().partition(|_| rng.gen_bool(0.5));
    if t_wires.is_empty() && !c_wires.is_empty() {
        t_wires.push(c_wires.remove(0));
    }
    let mut targets = t_wires.clone();
    targets.push(m);
    let len = rng.gen_range(1..=6);
    let mut gates = Vec::new();
    if !t_wires.is_empty() && rng.gen_bool(0.7) {
        // Make wire m carry both roles.
        gates.push(CircuitGate::new(*t_wires.choose(rng).unwrap(), vec![(m, true)]).unwrap());
        let c: Vec<(usize, bool)> = c_wires.iter().map(|&w| (w, rng.gen_bool(0.5))).collect();
        gates.push(CircuitGate::new(m, c).unwrap());
    }
    for _ in 0..len {
        if rng.gen_bool(0.1) {
            gates.push(CircuitGate::x(rng.gen_range(0..n)));
            continue;
        }
        let t = *targets.choose(rng).unwrap();
        let mut controls = Vec::new();
        for &w in c_wires.iter().chain(std::iter::once(&m)) {
            if w != t && rng.gen_bool(0.6) {
                controls.push((w, rng.gen_bool(0.7)));
            }
        }
        gates.push(CircuitGate::new(t, controls).unwrap());
    }
    Circuit::new(n, gates).unwrap()
}

/// A random element of the Toffoli class: `L · CCX · R` with affine `L, R`.
pub fn random_toffoli_class(n: usize, rng: &mut impl Rng) -> PermutationGate {
    let ccx = PermutationGate::mcx(n, &[(0, true), (1, true)], 2);
    random_affine(n, rng)
        .compose(&ccx)
        .unwrap()
        .compose(&random_affine(n, rng))
        .unwrap()
}
