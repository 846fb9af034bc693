mod common;

use cliffhier::classify::{ae_profile, two_sided_canonical, EquivalenceAction};
use cliffhier::gates::parse_circuit;
use cliffhier::hierarchy::{default_cap, is_semi_clifford, level, DiagGroupSpec};
use cliffhier::{
    Circuit, CircuitGate, CycleStructure, DiagonalGate, LevelVerdict, PermutationGate,
};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn diagonal_clifford(n: usize, rng: &mut impl Rng) -> DiagonalGate {
    let gens = DiagGroupSpec::d(n, 2).unwrap().generators();
    let mut d = DiagonalGate::identity(n);
    for _ in 0..rng.gen_range(0..8) {
        d = d.compose(gens.choose(rng).unwrap()).unwrap();
    }
    d
}

/// Paulis rise to level 2 under Clifford multiplication; nothing else moves.
fn at_least_two(v: LevelVerdict) -> LevelVerdict {
    match v {
        LevelVerdict::Level(k) => LevelVerdict::Level(k.max(2)),
        other => other,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_text_round_trips(seed in any::<u64>(), n in 1usize..=5, len in 0usize..8) {
        let mut r = rng(seed);
        let c = random_circuit(n, len, &mut r);
        let parsed = parse_circuit(&c.to_string()).unwrap();
        prop_assert_eq!(parsed, c);
    }

    #[test]
    fn cycle_structure_round_trips(seed in any::<u64>(), n in 1usize..=5) {
        let p = random_permutation(n, &mut rng(seed));
        let cs = CycleStructure::from_permutation(&p);
        prop_assert_eq!(cs.to_permutation(), p.clone());
        let total: usize = cs.shape().iter().sum();
        let fixed = p.table().iter().enumerate().filter(|&(j, &t)| j as u32 == t).count();
        prop_assert_eq!(total + fixed, 1 << n);
    }

    #[test]
    fn control_extends_cycle_structure(seed in any::<u64>(), n in 1usize..=4, pol in any::<bool>()) {
        let p = random_permutation(n, &mut rng(seed));
        let lhs = CycleStructure::from_permutation(&p.add_control(pol));
        let rhs = CycleStructure::from_permutation(&p).extend_with_control(pol);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn permutation_group_laws(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let (a, b, c) = (random_permutation(n, &mut r), random_permutation(n, &mut r), random_permutation(n, &mut r));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        let order = a.order();
        let mut pow = PermutationGate::identity(n);
        for _ in 0..order {
            pow = pow.compose(&a).unwrap();
        }
        prop_assert!(pow.is_identity());
    }

    #[test]
    fn circuit_matches_gate_by_gate_product(seed in any::<u64>(), n in 1usize..=4, len in 0usize..6) {
        let c = random_circuit(n, len, &mut rng(seed));
        let mut p = PermutationGate::identity(n);
        for g in c.gates() {
            let single = Circuit::new(n, vec![g.clone()]).unwrap().to_permutation();
            p = single.compose(&p).unwrap();
        }
        prop_assert_eq!(c.to_permutation(), p);
    }

    #[test]
    fn level_invariant_under_monomial_cliffords(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let u = random_monomial(n, r.gen_range(0..=3), &mut r);
        let left = random_affine(n, &mut r).to_monomial().compose(diagonal_clifford(n, &mut r).as_monomial()).unwrap();
        let right = diagonal_clifford(n, &mut r).into_monomial().compose(&random_affine(n, &mut r).to_monomial()).unwrap();
        let moved = left.compose(&u).unwrap().compose(&right).unwrap();
        let cap = default_cap(n);
        prop_assert_eq!(at_least_two(level(&u, cap)), at_least_two(level(&moved, cap)));
        prop_assert_eq!(is_semi_clifford(&u), is_semi_clifford(&moved));
    }

    #[test]
    fn profile_and_canonical_form_are_two_sided_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 3;
        let p = random_permutation(n, &mut r);
        let moved = random_affine(n, &mut r).compose(&p).unwrap().compose(&random_affine(n, &mut r)).unwrap();
        prop_assert_eq!(ae_profile(&p, EquivalenceAction::TwoSided), ae_profile(&moved, EquivalenceAction::TwoSided));
        prop_assert_eq!(two_sided_canonical(&p).unwrap(), two_sided_canonical(&moved).unwrap());
    }

    #[test]
    fn conjugation_profile_is_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 4;
        let p = random_permutation(n, &mut r);
        let a = random_affine(n, &mut r);
        let moved = a.compose(&p).unwrap().compose(&a.inverse()).unwrap();
        prop_assert_eq!(ae_profile(&p, EquivalenceAction::Conjugation), ae_profile(&moved, EquivalenceAction::Conjugation));
    }

    #[test]
    fn mismatch_ignores_order_of_commuting_gates(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let c = random_circuit(n, r.gen_range(2..6), &mut r);
        let mut gates = c.gates().to_vec();
        for i in 0..gates.len() - 1 {
            let (a, b) = (&gates[i], &gates[i + 1]);
            let commute = !b.controls().iter().any(|&(w, _)| w == a.target())
                && !a.controls().iter().any(|&(w, _)| w == b.target());
            if commute {
                gates.swap(i, i + 1);
                break;
            }
        }
        let swapped = Circuit::new(n, gates).unwrap();
        prop_assert_eq!(swapped.wire_mismatch(), c.wire_mismatch());
        prop_assert_eq!(swapped.to_permutation(), c.to_permutation());
    }
}

#[test]
fn toffoli_profile_stable_under_hundred_random_transforms() {
    let ccx = PermutationGate::mcx(3, &[(0, true), (1, true)], 2);
    let base = ae_profile(&ccx, EquivalenceAction::TwoSided);
    let mut r = rng(99);
    for _ in 0..100 {
        let moved = random_affine(3, &mut r)
            .compose(&ccx)
            .unwrap()
            .compose(&random_affine(3, &mut r))
            .unwrap();
        assert_eq!(ae_profile(&moved, EquivalenceAction::TwoSided), base);
    }
}

#[test]
fn toffoli_is_third_level_and_semi_clifford() {
    let c = parse_circuit("qubits 3\nMCX +0 +1 ; 2\n").unwrap();
    assert_eq!(c.wire_mismatch(), 0);
    let u = c.to_permutation().to_monomial();
    assert_eq!(level(&u, default_cap(3)), LevelVerdict::Level(3));
    assert!(is_semi_clifford(&u));
}

#[test]
fn bare_x_gates_do_not_count_toward_mismatch() {
    let c = Circuit::new(2, vec![CircuitGate::x(0), CircuitGate::cx(0, 1).unwrap()]).unwrap();
    assert_eq!(c.wire_mismatch(), 0);
}
