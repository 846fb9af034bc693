//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use cliffhier::classify::{
    all_structures, classify_cycle_structures, count_ae_classes_full, extend_classification,
    monomial_equiv_implies_affine, sample_monomial_equivalence, table_shapes,
    verify_4q_representatives, ClassifyOptions, CycleClassification,
};
use cliffhier::hierarchy::{
    default_cap, diag_group_order, diagonal_level, generate_diag_group, in_diag_group, is_in_ch3,
    level, DiagGroupSpec,
};
use cliffhier::search::{
    check_class, passes_ch3_test, restricted_space, sweep_ch3, sweep_permutation, ClassSpace,
    SweepOptions, Verdict,
};
use cliffhier::{DiagonalGate, LevelOracle, LevelVerdict, MonomialOperator, PauliString};
use common::*;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

const CASES: usize = 200;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e <= limit, || format!("{what} took {e:?}, limit {limit:?}"))?;
    Ok(e)
}

fn expected_row(n: usize) -> Vec<&'static str> {
    match n {
        1 => vec!["1/1", "1/1", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
        2 => vec![
            "1/1", "1/1", "1/1", "1/1", "1/1", "0", "0", "0", "0", "0", "0",
        ],
        3 => vec![
            "1/1", "1/1", "0/1", "1/2", "1/2", "0/1", "1/2", "1/2", "1/2", "1/2", "1/2",
        ],
        4 => vec![
            "1/1", "1/1", "0/1", "1/2", "1/2", "0/2", "0/3", "0/9", "1/9", "0/6", "2/6",
        ],
        _ => vec![
            "1/1", "1/1", "0/1", "1/2", "1/2", "0/2", "0/3", "0/10", "1/10", "0/7", "2/7",
        ],
    }
}

fn census() -> Outcome {
    let t = Instant::now();
    let counts: Vec<usize> = (1..=3)
        .map(|n| count_ae_classes_full(n).map(|c| c.classes.len()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(counts == [1, 1, 4], || {
        format!("class counts {counts:?}, expected [1, 1, 4]")
    })?;
    let e = within(t, Duration::from_secs(10), "census")?;
    Ok(format!("classes {counts:?} in {e:?}"))
}

fn three_qubit_split() -> Outcome {
    let c = count_ae_classes_full(3).map_err(|e| e.to_string())?;
    ensure(c.num_in_ch() == 2, || {
        format!("{} of 4 classes in CH, expected 2", c.num_in_ch())
    })?;
    let levels: Vec<String> = c.classes.iter().map(|r| format!("{:?}", r.level)).collect();
    Ok(format!("2 of 4 in CH; levels {levels:?}"))
}

fn four_qubit_representatives() -> Outcome {
    let t = Instant::now();
    let r = verify_4q_representatives().map_err(|e| e.to_string())?;
    let levels: Vec<Option<u32>> = r.representatives.iter().map(|x| x.level.level()).collect();
    let expect = [1, 4, 3, 4, 4].map(Some);
    ensure(levels == expect, || {
        format!("levels {levels:?}, expected {expect:?}")
    })?;
    ensure(r.profile_collisions.is_empty(), || {
        format!("equal invariant profiles: {:?}", r.profile_collisions)
    })?;
    ensure(r.passed(), || {
        format!("canonical-form collisions: {:?}", r.canonical_collisions)
    })?;
    let e = within(t, Duration::from_secs(60), "verify-4q")?;
    Ok(format!(
        "levels [1, 4, 3, 4, 4], profiles pairwise distinct, in {e:?}"
    ))
}

fn row_of(cells: &[CycleClassification]) -> Vec<String> {
    cells.iter().map(CycleClassification::cell).collect()
}

fn check_row(n: usize, got: &[String]) -> Result<(), String> {
    let expect = expected_row(n);
    ensure(got == expect.as_slice(), || {
        format!("n={n}: row {got:?}, expected {expect:?}")
    })
}

fn direct_rows() -> Result<(String, Vec<CycleClassification>), String> {
    let t = Instant::now();
    let mut last = Vec::new();
    for n in 1..=4 {
        let cells: Vec<CycleClassification> = table_shapes()
            .iter()
            .map(|s| classify_cycle_structures(n, s))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        check_row(n, &row_of(&cells))?;
        last = cells;
    }
    let e = within(t, Duration::from_secs(15 * 60), "table rows n <= 4")?;
    Ok((format!("rows n=1..4 match, in {e:?}"), last))
}

fn extended_row(four: &[CycleClassification]) -> Outcome {
    let t = Instant::now();
    let cells: Vec<CycleClassification> = four
        .iter()
        .map(|c| extend_classification(c, &ClassifyOptions::default()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let unresolved: Vec<_> = cells
        .iter()
        .flat_map(|c| c.unresolved_pairs.clone())
        .collect();
    ensure(unresolved.is_empty(), || {
        format!("unresolved pairs: {unresolved:?}")
    })?;
    check_row(5, &row_of(&cells))?;
    Ok(format!(
        "n=5 row matches, 0 unresolved pairs, in {:?}",
        t.elapsed()
    ))
}

fn sweep() -> Outcome {
    let t = Instant::now();
    let filtered = sweep_ch3(SweepOptions::default()).map_err(|e| e.to_string())?;
    let raw = sweep_ch3(SweepOptions {
        space: ClassSpace::Restricted,
        filters: false,
    })
    .map_err(|e| e.to_string())?;
    ensure(
        filtered.classes_total == 4096 && raw.classes_checked == 4096,
        || "sweep did not cover 4096 classes".into(),
    )?;
    ensure(
        filtered.classes_excluded() + filtered.classes_checked == 4096,
        || "excluded + checked != total".into(),
    )?;
    ensure(filtered.verdict == Verdict::AllSemiClifford, || {
        format!(
            "filtered verdict: {} ({} offenders)",
            filtered.verdict,
            filtered.offenders.len()
        )
    })?;
    ensure(raw.verdict == filtered.verdict, || {
        format!("no-filter verdict: {}", raw.verdict)
    })?;
    Ok(format!(
        "all semi-Clifford in both modes (filtered: {} checked, excluded {:?}; unfiltered: {} in CH3) in {:?}",
        filtered.classes_checked,
        filtered.classes_excluded_by,
        raw.in_ch3,
        t.elapsed()
    ))
}

fn diag_orders() -> Outcome {
    let mut parts = Vec::new();
    for (n, k) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        let spec = DiagGroupSpec::d(n, k).map_err(|e| e.to_string())?;
        let closure = generate_diag_group(&spec).map_err(|e| e.to_string())?.len();
        let formula = diag_group_order(n, k);
        ensure(formula == BigUint::from(closure), || {
            format!("(n={n},k={k}): formula {formula}, closure {closure}")
        })?;
        parts.push(format!("({n},{k})={closure}"));
    }
    Ok(parts.join(" "))
}

// Property suites.

fn random_pauli(n: usize, rng: &mut impl Rng) -> PauliString {
    let dim = 1usize << n;
    PauliString::from_index_masks(n, rng.gen_range(0..dim), rng.gen_range(0..dim))
        .with_phase(rng.gen_range(0..4))
}

fn dense_conjugation() -> Outcome {
    let mut rng = rng(1);
    for case in 0..CASES {
        let n = rng.gen_range(1..=3);
        let u = random_monomial(n, rng.gen_range(0..=3), &mut rng);
        let v = random_monomial(n, rng.gen_range(0..=3), &mut rng);
        let p = random_pauli(n, &mut rng);
        let du = dense(&u);
        let got = dense(&u.conjugate(&p).map_err(|e| e.to_string())?);
        let want = matmul(&matmul(&du, &dense_pauli(&p)), &adjoint(&du));
        ensure(approx_eq(&got, &want), || {
            format!("case {case}: conjugation differs at n={n}")
        })?;
        let prod = dense(&u.compose(&v).map_err(|e| e.to_string())?);
        ensure(approx_eq(&prod, &matmul(&du, &dense(&v))), || {
            format!("case {case}: composition differs at n={n}")
        })?;
    }
    Ok(format!("{CASES} cases"))
}

fn random_group_element(spec: &DiagGroupSpec, rng: &mut impl Rng) -> DiagonalGate {
    let gens = spec.generators();
    let mut d = DiagonalGate::identity(spec.n);
    for _ in 0..rng.gen_range(1..12) {
        d = d.compose(gens.choose(rng).unwrap()).unwrap();
    }
    d
}

fn square_drops_level() -> Outcome {
    let mut rng = rng(2);
    for case in 0..CASES {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(2..=4);
        let spec = DiagGroupSpec::d(n, k).unwrap();
        let d = random_group_element(&spec, &mut rng);
        ensure(in_diag_group(&d, &spec), || {
            format!("case {case}: sampled element outside D_{k}")
        })?;
        let sq = d.compose(&d).unwrap();
        ensure(diagonal_level(&sq, k).at_most(k - 1), || {
            format!("case {case}: d^2 of a D_{k} element not in D_{}", k - 1)
        })?;
        // A non-dyadic factor survives squaring.
        let mut ph: Vec<u64> = d.phase_numerators().iter().map(|&p| p * 3).collect();
        ph[(1 << n) - 1] += d.denom();
        let odd = DiagonalGate::new(n, ph, 3 * d.denom()).unwrap();
        let odd_sq = odd.compose(&odd).unwrap();
        let cap = default_cap(n);
        ensure(
            (1..=cap).all(|j| !in_diag_group(&odd_sq, &DiagGroupSpec::d(n, j).unwrap())),
            || format!("case {case}: non-dyadic square reported in CH"),
        )?;
    }
    Ok(format!("{CASES} cases"))
}

fn containment_chain() -> Outcome {
    let mut checked = 0;
    for n in 1..=2 {
        for k in 1..=2u32 {
            let d_k =
                generate_diag_group(&DiagGroupSpec::d(n, k).unwrap()).map_err(|e| e.to_string())?;
            let diag_k = generate_diag_group(&DiagGroupSpec::diag(n, k).unwrap())
                .map_err(|e| e.to_string())?;
            let diag_spec = DiagGroupSpec::diag(n, k).unwrap();
            let top = DiagGroupSpec::d(n, k + n as u32).unwrap();
            ensure(d_k.iter().all(|d| in_diag_group(d, &diag_spec)), || {
                format!("D_{k} not inside Diag_{k} at n={n}")
            })?;
            ensure(diag_k.iter().all(|d| in_diag_group(d, &top)), || {
                format!("Diag_{k} not inside D_{} at n={n}", k + n as u32)
            })?;
            checked += d_k.len() + diag_k.len();
        }
    }
    Ok(format!("exhaustive over {checked} elements"))
}

fn spectrum_preserved() -> Outcome {
    let mut rng = rng(3);
    for case in 0..CASES {
        let n = rng.gen_range(1..=4);
        let log_den = rng.gen_range(0..=4);
        let d = random_diagonal(n, log_den, &mut rng);
        let p = random_permutation(n, &mut rng);
        let c = d.conjugate_by(&p).unwrap();
        ensure(c.spectrum() == d.spectrum(), || {
            format!("case {case}: spectrum changed")
        })?;
        for k in 1..=4 {
            let spec = DiagGroupSpec::diag(n, k).unwrap();
            ensure(in_diag_group(&c, &spec) == in_diag_group(&d, &spec), || {
                format!("case {case}: Diag_{k} membership changed")
            })?;
        }
    }
    Ok(format!("{CASES} cases"))
}

fn pixd_two_paths() -> Outcome {
    let mut rng = rng(4);
    let mut positives = 0;
    for case in 0..CASES {
        let n = rng.gen_range(3..=4);
        let pi = random_toffoli_class(n, &mut rng);
        let d = match case % 3 {
            0 => random_group_element(&DiagGroupSpec::d(n, 2).unwrap(), &mut rng),
            1 => random_group_element(&DiagGroupSpec::d(n, 3).unwrap(), &mut rng),
            _ => random_diagonal(n, 3, &mut rng),
        };
        let u = pi.to_monomial().compose(d.as_monomial()).unwrap();
        let lemma = passes_ch3_test(&pi, &d);
        let direct = is_in_ch3(&u);
        let recursion = level(&u, default_cap(n)).at_most(3);
        ensure(lemma == direct && direct == recursion, || {
            format!("case {case}: lemma {lemma}, generators {direct}, recursion {recursion}")
        })?;
        positives += lemma as usize;
    }
    ensure(positives > 0 && positives < CASES, || {
        "samples not mixed".into()
    })?;
    Ok(format!("{CASES} cases, {positives} in CH3"))
}

fn inverse_symmetry() -> Outcome {
    let mut rng = rng(5);
    let mut oracle = LevelOracle::new();
    for case in 0..CASES {
        let n = rng.gen_range(1..=3);
        let pi = random_permutation(n, &mut rng).to_monomial();
        let d = random_diagonal(n, rng.gen_range(1..=4), &mut rng);
        let cap = default_cap(n);
        let a = oracle.level(&pi.compose(d.as_monomial()).unwrap(), cap);
        let b = oracle.level(&pi.compose(d.inverse().as_monomial()).unwrap(), cap);
        ensure(a == b, || {
            format!("case {case}: level {a:?} vs inverse {b:?}")
        })?;
    }
    let pi = sweep_permutation();
    for dc in restricted_space() {
        let a = check_class(&pi, &dc, false);
        let b = check_class(&pi, &dc.negated(), false);
        ensure(a == b, || format!("class {dc}: {a:?} vs negated {b:?}"))?;
    }
    Ok(format!("{CASES} random pairs, all 4096 sweep classes"))
}

fn in_ch(c: &cliffhier::Circuit, oracle: &mut LevelOracle) -> LevelVerdict {
    let n = c.num_qubits();
    oracle.level(&c.to_permutation().to_monomial(), default_cap(n))
}

fn low_mismatch_in_ch() -> Outcome {
    let mut rng = rng(6);
    let mut oracle = LevelOracle::new();
    let mut exactly_one = 0;
    for case in 0..CASES {
        let n = rng.gen_range(2..=4);
        let c = random_low_mismatch_circuit(n, &mut rng);
        ensure(c.wire_mismatch() <= 1, || {
            format!("case {case}: generator produced mismatch > 1")
        })?;
        exactly_one += (c.wire_mismatch() == 1) as usize;
        let v = in_ch(&c, &mut oracle);
        ensure(v.in_ch(), || format!("case {case}: {v:?} for\n{c}"))?;
    }
    ensure(exactly_one >= CASES / 4, || {
        format!("only {exactly_one} circuits with mismatch 1")
    })?;
    Ok(format!(
        "{CASES} circuits, {exactly_one} with mismatch exactly 1"
    ))
}

fn zero_mismatch_in_ch() -> Outcome {
    let mut rng = rng(7);
    let mut oracle = LevelOracle::new();
    for case in 0..CASES {
        let n = rng.gen_range(1..=4);
        let c = random_zero_mismatch_circuit(n, &mut rng);
        ensure(c.wire_mismatch() == 0, || {
            format!("case {case}: generator produced mismatch")
        })?;
        let v = in_ch(&c, &mut oracle);
        ensure(v.in_ch(), || format!("case {case}: {v:?} for\n{c}"))?;
    }
    Ok(format!("{CASES} circuits"))
}

fn monomial_equivalence_harness() -> Outcome {
    let mut rng = rng(8);
    let n = 3;
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < CASES {
        attempts += 1;
        ensure(attempts <= 100 * CASES, || {
            format!("only {accepted} samples accepted")
        })?;
        let p1 = if rng.gen_bool(0.5) {
            random_toffoli_class(n, &mut rng)
        } else {
            random_permutation(n, &mut rng)
        };
        let d_left: MonomialOperator = if rng.gen_bool(0.5) {
            let z = rng.gen_range(0..1usize << n);
            cliffhier::monomial::pauli_masks_to_monomial(n, 0, z)
        } else {
            random_group_element(&DiagGroupSpec::d(n, 2).unwrap(), &mut rng).into_monomial()
        };
        let a_left = random_affine(n, &mut rng);
        let a_right = random_affine(n, &mut rng);
        let Some(eq) = sample_monomial_equivalence(&p1, &a_left, &d_left, &a_right)
            .map_err(|e| e.to_string())?
        else {
            continue;
        };
        let ok = monomial_equiv_implies_affine(&eq).map_err(|e| e.to_string())?;
        ensure(ok, || {
            format!("sample {accepted}: affine parts do not relate p1 and p2")
        })?;
        accepted += 1;
    }
    Ok(format!("{accepted} equivalences ({attempts} draws)"))
}

fn rank_bound() -> Outcome {
    let mut total = 0usize;
    for n in 1..=4 {
        for shape in table_shapes() {
            let k: usize = shape.iter().sum();
            if k == 0 {
                continue;
            }
            let bound = (usize::BITS - 1 - k.leading_zeros()) as usize;
            for cs in all_structures(n, &shape).map_err(|e| e.to_string())? {
                ensure(cs.matrix().rank() >= bound, || {
                    format!(
                        "{} on {n} qubits has rank below {bound}",
                        cs.canonical_notation()
                    )
                })?;
                total += 1;
            }
        }
    }
    Ok(format!("exhaustive over {total} structures"))
}

fn report(label: &str, outcome: &Outcome) -> bool {
    match outcome {
        Ok(detail) => {
            println!("{label}: PASS ({detail})");
            true
        }
        Err(why) => {
            println!("{label}: FAIL ({why})");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    ok &= report("criterion 1 [affine class census n=1..3]", &census());
    ok &= report(
        "criterion 2 [three-qubit hierarchy split]",
        &three_qubit_split(),
    );
    ok &= report(
        "criterion 3 [four-qubit representatives]",
        &four_qubit_representatives(),
    );
    let (direct, four) = match direct_rows() {
        Ok((detail, cells)) => (Ok(detail), Some(cells)),
        Err(e) => (Err(e), None),
    };
    ok &= report("criterion 4 [cycle-structure table, direct rows]", &direct);
    let extended = match four {
        Some(cells) => extended_row(&cells),
        None => Err("needs the four-qubit row".into()),
    };
    ok &= report(
        "criterion 5 [cycle-structure table, extended row]",
        &extended,
    );
    ok &= report("criterion 6 [third-level four-qubit sweep]", &sweep());
    ok &= report("criterion 7 [diagonal group orders]", &diag_orders());

    type Suite = (&'static str, fn() -> Outcome);
    let suites: [Suite; 10] = [
        ("monomial conjugation vs dense matrices", dense_conjugation),
        ("squaring lowers diagonal level", square_drops_level),
        ("diagonal containment chain", containment_chain),
        ("spectrum under permutation conjugation", spectrum_preserved),
        ("third-level test, two paths", pixd_two_paths),
        ("inverse symmetry", inverse_symmetry),
        ("wire mismatch <= 1 is in CH", low_mismatch_in_ch),
        ("wire mismatch 0 is in CH", zero_mismatch_in_ch),
        (
            "monomial-Clifford equivalence is affine",
            monomial_equivalence_harness,
        ),
        ("cycle-structure rank bound", rank_bound),
    ];
    let mut suites_ok = true;
    let mut failed = Vec::new();
    for (name, f) in suites {
        let out = f();
        suites_ok &= report(&format!("  suite [{name}]"), &out);
        if out.is_err() {
            failed.push(name);
        }
    }
    let summary = if suites_ok {
        Ok(format!("{} suites", suites.len()))
    } else {
        Err(format!("failing suites: {failed:?}"))
    };
    ok &= report("criterion 8 [property suites]", &summary);
    if !ok {
        std::process::exit(1);
    }
}
