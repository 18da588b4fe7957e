//! Acceptance suite: ten numbered criteria covering the decomposition
//! engine, its oracles, the cone and classification layers, and the CLI.
//! Each test prints exactly one `pass`/`FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`). Every comparison is in
//! exact rational arithmetic with zero tolerance.

use hkz_core::cones::{self, ExtremalityResult, NullPairClass};
use hkz_core::classify::{d_dimension_class, Regime};
use hkz_core::model::{catalog_model, parse_class, DivisorClass, EffectiveExpression};
use hkz_core::rat::{ratio, rat_int, Rat};
use hkz_core::ratlin::{inertia, Inertia, RatMatrix};
use hkz_core::zariski::{
    bruteforce_candidates, decompose, decompose_bruteforce, minimality_check, verify,
};
use hkz_testkit as tk;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

/// Runs a criterion body and prints its single pass/FAIL line.
fn criterion<F: FnOnce()>(number: u32, summary: &str, body: F) {
    let started = Instant::now();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => {
            println!(
                "criterion {number:02}: pass ({:.2}s) — {summary}",
                started.elapsed().as_secs_f64()
            );
        }
        Err(cause) => {
            println!("criterion {number:02}: FAIL — {summary}");
            resume_unwind(cause);
        }
    }
}

fn int_matrix(rows: &[&[i64]]) -> RatMatrix {
    let n = rows.len();
    let entries: Vec<Rat> = rows
        .iter()
        .flat_map(|r| r.iter().map(|&v| rat_int(v)))
        .collect();
    RatMatrix::new(n, rows.first().map_or(0, |r| r.len()), entries)
}

fn class(coords: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(coords)
}

#[test]
fn criterion_01_oracle_equivalence() {
    criterion(
        1,
        "500 random models × 5 pseudo-effective classes: engine = brute force",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(9001);
            let started = Instant::now();
            let mut checked = 0usize;
            for _ in 0..500 {
                let gm = tk::random_valid_model(&mut rng);
                let m = &gm.model;
                assert!(m.rank() <= 6 && m.primes().len() <= 8);
                assert!(
                    tk::matrix_entries_bounded(m.space().gram_matrix(), 20),
                    "gram entries must stay within numerator/denominator bound 20"
                );
                for _ in 0..5 {
                    let (d, _) = tk::random_pe_class(&mut rng, m);
                    let fast = decompose(m, &d).expect("engine decomposes PE classes");
                    let slow = decompose_bruteforce(m, &d).expect("oracle decomposes PE classes");
                    assert!(fast.agrees_with(&slow), "P/N mismatch against oracle");
                    assert_eq!(fast.support(), slow.support(), "support mismatch");
                    checked += 1;
                }
            }
            assert_eq!(checked, 2500);
            let elapsed = started.elapsed();
            assert!(
                elapsed.as_secs() < 60,
                "expected < 60 s, took {elapsed:?}"
            );
        },
    );
}

#[test]
fn criterion_02_worked_example_a() {
    criterion(
        2,
        "U-basic (1,0) → P = (1/2,1/2), N = (1/2)·E, verify all-pass",
        || {
            let m = catalog_model("U-basic").expect("catalog model");
            let d = class(&[1, 0]);
            let dec = decompose(&m, &d).expect("decomposes");
            assert_eq!(
                dec.positive_part(),
                &DivisorClass::new(vec![ratio(1, 2), ratio(1, 2)])
            );
            assert_eq!(
                dec.coefficients(),
                &BTreeMap::from([("E".to_string(), ratio(1, 2))])
            );
            let report = verify(&m, &d, &dec);
            assert!(report.all_passed, "verify checks: {:?}", report.checks);
            assert!(report.checks.iter().all(|c| c.pass));
        },
    );
}

#[test]
fn criterion_03_worked_example_b_multi_round() {
    criterion(
        3,
        "U-neg2-chain (5/2,5/2,2) → P = (2,2,1), N = E1 + (1/2)E2 in 2 rounds, q(P) = 6, q(P,ω) = 8",
        || {
            let m = catalog_model("U-neg2-chain").expect("catalog model");
            let d = parse_class("5/2,5/2,2").expect("class parses");
            let dec = decompose(&m, &d).expect("decomposes");
            assert_eq!(dec.positive_part(), &class(&[2, 2, 1]));
            assert_eq!(
                dec.coefficients(),
                &BTreeMap::from([
                    ("E1".to_string(), rat_int(1)),
                    ("E2".to_string(), ratio(1, 2)),
                ])
            );
            assert_eq!(dec.rounds(), 2, "must take exactly two rounds");
            assert_eq!(m.q_square(dec.positive_part()), rat_int(6));
            assert_eq!(m.q(dec.positive_part(), m.kahler()), rat_int(8));
            let slow = decompose_bruteforce(&m, &d).expect("oracle decomposes");
            assert!(dec.agrees_with(&slow));
        },
    );
}

#[test]
fn criterion_04_uniqueness_idempotence_scaling() {
    criterion(
        4,
        "1000 random (model, D): scaling, idempotence, single brute-force support",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(9004);
            for _ in 0..1000 {
                let gm = tk::random_valid_model(&mut rng);
                let m = &gm.model;
                let (d, _) = tk::random_pe_class(&mut rng, m);
                let dec = decompose(m, &d).expect("decomposes");

                // decompose(tD) = t·decompose(D) for random rational t > 0.
                let t = tk::positive_small_rat(&mut rng);
                let scaled = decompose(m, &d.scale(&t)).expect("scaled decomposes");
                assert_eq!(scaled.positive_part(), &dec.positive_part().scale(&t));
                for (name, c) in dec.coefficients() {
                    assert_eq!(scaled.coefficient(name), c.clone() * t.clone());
                }
                assert_eq!(scaled.support(), dec.support());

                // decompose(P) = (P, 0).
                let again = decompose(m, dec.positive_part()).expect("P decomposes");
                assert_eq!(again.positive_part(), dec.positive_part());
                assert!(again.coefficients().is_empty(), "P must re-decompose as itself");

                // Brute-force enumeration accepts exactly one canonical
                // decomposition (all accepted subsets collapse to it).
                let candidates = bruteforce_candidates(m, &d).expect("enumeration runs");
                assert!(!candidates.is_empty());
                assert!(
                    candidates.iter().all(|c| c.agrees_with(&candidates[0])),
                    "multiple distinct valid supports found"
                );
                assert!(candidates[0].agrees_with(&dec));
            }
        },
    );
}

#[test]
fn criterion_05_minimality_search() {
    criterion(
        5,
        "200 instances × 50 candidate N′: none undercuts any engine coefficient",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(9005);
            let mut valid_candidates = 0usize;
            let mut nonzero_instances = 0usize;
            for _ in 0..200 {
                let gm = tk::random_valid_model(&mut rng);
                let m = &gm.model;
                let (d, _) = tk::random_pe_class(&mut rng, m);
                let dec = decompose(m, &d).expect("decomposes");
                if !dec.coefficients().is_empty() {
                    nonzero_instances += 1;
                }
                for _ in 0..50 {
                    // Random effective N′ near the engine's N: bump, shrink,
                    // or keep each coefficient; only candidates keeping
                    // D − N′ inside the dual cone count as competitors.
                    let mut coefficients: BTreeMap<String, Rat> = BTreeMap::new();
                    for p in m.primes() {
                        let base = dec.coefficient(&p.name);
                        let c = match rng.gen_range(0..4) {
                            0 => base + tk::nonneg_small_rat(&mut rng),
                            1 => base * ratio(rng.gen_range(0..=3), 4),
                            _ => base,
                        };
                        if c > rat_int(0) {
                            coefficients.insert(p.name.clone(), c);
                        }
                    }
                    let nprime = EffectiveExpression::from_coefficients(coefficients);
                    match minimality_check(m, &d, &dec, &nprime) {
                        Ok(true) => valid_candidates += 1,
                        Ok(false) => panic!("a valid N′ undercut an engine coefficient"),
                        Err(_) => {} // not a competitor: D − N′ left the dual cone
                    }
                }
            }
            assert!(
                nonzero_instances >= 40,
                "want ≥ 40 instances with nonzero N, got {nonzero_instances}"
            );
            assert!(
                valid_candidates >= 300,
                "want ≥ 300 valid competitors overall, got {valid_candidates}"
            );
        },
    );
}

#[test]
fn criterion_06_null_pair_dichotomy() {
    criterion(
        6,
        "500 precondition-satisfying (model, L, D): dichotomy never fails",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(9006);
            let mut parallel = 0usize;
            let mut negative = 0usize;
            for _ in 0..500 {
                let gm = tk::random_valid_model(&mut rng);
                let m = &gm.model;
                let (l, d, witness) = tk::random_null_pair_instance(&mut rng, &gm);
                let verdict = cones::null_pair_classify(m, &l, &d, Some(&witness))
                    .expect("no consistency failure on precondition-satisfying input");
                match verdict {
                    NullPairClass::Parallel { factor } => {
                        parallel += 1;
                        assert_eq!(d, l.scale(&factor), "parallel factor must reproduce D");
                        assert_eq!(m.q_square(&d), rat_int(0), "Parallel ⟹ q(D) = 0");
                    }
                    NullPairClass::NegativeSquare { q_value } => {
                        negative += 1;
                        assert_eq!(m.q_square(&d), q_value);
                        assert!(q_value < rat_int(0), "NegativeSquare ⟹ q(D) < 0");
                    }
                }
            }
            assert!(
                parallel >= 50 && negative >= 50,
                "want both verdicts well represented, got {parallel} parallel / {negative} negative"
            );
        },
    );
}

#[test]
fn criterion_07_dimension_regime_classifier() {
    criterion(
        7,
        "three regime examples exact; regime scale-invariant on 200 instances",
        || {
            let chain = catalog_model("U-neg2-chain").expect("catalog model");
            let report = d_dimension_class(&chain, &parse_class("5/2,5/2,2").expect("parses"))
                .expect("classifies");
            assert_eq!(report.regime, Regime::Maximal);
            assert_eq!(report.q_p, rat_int(6));

            let basic = catalog_model("U-basic").expect("catalog model");
            let report = d_dimension_class(&basic, &class(&[1, -1])).expect("classifies");
            assert_eq!(report.regime, Regime::Zero);
            assert!(report.decomposition.positive_part().is_zero());

            let report = d_dimension_class(&basic, &class(&[0, 1])).expect("classifies");
            assert_eq!(report.regime, Regime::NullCandidate);
            assert_eq!(report.q_p, rat_int(0));

            let mut rng = ChaCha8Rng::seed_from_u64(9007);
            for _ in 0..200 {
                let gm = tk::random_valid_model(&mut rng);
                let m = &gm.model;
                let (d, _) = tk::random_pe_class(&mut rng, m);
                let t = tk::positive_small_rat(&mut rng);
                let base = d_dimension_class(m, &d).expect("classifies");
                let scaled = d_dimension_class(m, &d.scale(&t)).expect("classifies");
                assert_eq!(base.regime, scaled.regime, "regime must be scale-invariant");
                assert_eq!(base.q_p.clone() * t.clone() * t.clone(), scaled.q_p);
                if base.regime == Regime::Maximal
                    && base.decomposition.has_clean_diagnostics()
                {
                    // Maximal positive parts meet the Kähler form strictly.
                    assert!(m.q(base.decomposition.positive_part(), m.kahler()) > rat_int(0));
                }
            }
        },
    );
}

#[test]
fn criterion_08_extremality_matches_oracle() {
    criterion(
        8,
        "three extremality examples exact; 200 random cones match the enumeration oracle",
        || {
            let gens2 = vec![class(&[1, 0]), class(&[0, 1])];
            match cones::extremal_ray_test(&gens2, &class(&[1, 1])).expect("in cone") {
                ExtremalityResult::NotExtremal { witness } => {
                    assert_eq!(witness, vec![rat_int(1), rat_int(1)]);
                }
                other => panic!("expected NotExtremal, got {other:?}"),
            }
            assert_eq!(
                cones::extremal_ray_test(&gens2, &class(&[1, 0])).expect("in cone"),
                ExtremalityResult::Extremal
            );
            let gens3 = vec![class(&[1, 0]), class(&[0, 1]), class(&[1, 1])];
            match cones::extremal_ray_test(&gens3, &class(&[1, 1])).expect("in cone") {
                ExtremalityResult::NotExtremal { witness } => {
                    assert_eq!(witness, vec![rat_int(1), rat_int(1), rat_int(0)]);
                }
                other => panic!("expected NotExtremal, got {other:?}"),
            }

            let mut rng = ChaCha8Rng::seed_from_u64(9008);
            let (mut extremal, mut interior, mut outside) = (0usize, 0usize, 0usize);
            for _ in 0..200 {
                let rank = rng.gen_range(2..=4);
                let count = rng.gen_range(1..=6);
                let generators: Vec<DivisorClass> = (0..count)
                    .map(|_| loop {
                        let g = tk::random_class(&mut rng, rank, 3);
                        if !g.is_zero() {
                            break g;
                        }
                    })
                    .collect();
                let l = if rng.gen_bool(0.5) {
                    // A nonnegative combination, usually interior.
                    let mut acc = DivisorClass::zero(rank);
                    for g in &generators {
                        acc = acc.add(&g.scale(&tk::nonneg_small_rat(&mut rng)));
                    }
                    if acc.is_zero() {
                        generators[0].clone()
                    } else {
                        acc
                    }
                } else {
                    loop {
                        let l = tk::random_class(&mut rng, rank, 3);
                        if !l.is_zero() {
                            break l;
                        }
                    }
                };
                let expected = tk::extremal_oracle(&generators, &l);
                match cones::extremal_ray_test(&generators, &l) {
                    Ok(ExtremalityResult::Extremal) => {
                        extremal += 1;
                        assert_eq!(expected, tk::OracleExtremality::Extremal);
                    }
                    Ok(ExtremalityResult::NotExtremal { witness }) => {
                        interior += 1;
                        assert_eq!(expected, tk::OracleExtremality::NotExtremal);
                        // The witness must reach L with a positive weight on
                        // some generator not proportional to L.
                        let mut acc = DivisorClass::zero(rank);
                        let mut non_proportional = false;
                        for (lambda, g) in witness.iter().zip(&generators) {
                            assert!(lambda >= &rat_int(0));
                            acc = acc.add(&g.scale(lambda));
                            if lambda > &rat_int(0) && g.proportion_to(&l).is_none() {
                                non_proportional = true;
                            }
                        }
                        assert_eq!(acc, l);
                        assert!(non_proportional);
                    }
                    Err(cones::ConesError::NotInCone) => {
                        outside += 1;
                        assert_eq!(expected, tk::OracleExtremality::NotInCone);
                    }
                    Err(other) => panic!("unexpected error: {other}"),
                }
            }
            assert!(
                extremal >= 15 && interior >= 15 && outside >= 15,
                "verdict mix too thin: {extremal} extremal / {interior} not / {outside} outside"
            );
        },
    );
}

#[test]
fn criterion_09_inertia_examples_and_congruence_invariance() {
    criterion(
        9,
        "inertia examples (1,0,1)/(0,0,1)/(1,0,2); 500 congruence transforms preserve inertia",
        || {
            let u = int_matrix(&[&[0, 1], &[1, 0]]);
            assert_eq!(
                inertia(&u),
                Inertia { positive: 1, zero: 0, negative: 1 }
            );
            let neg2 = int_matrix(&[&[-2]]);
            assert_eq!(
                inertia(&neg2),
                Inertia { positive: 0, zero: 0, negative: 1 }
            );
            let chain = int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
            assert_eq!(
                inertia(&chain),
                Inertia { positive: 1, zero: 0, negative: 2 }
            );

            let mut rng = ChaCha8Rng::seed_from_u64(9009);
            for _ in 0..500 {
                let n = rng.gen_range(1..=5);
                let a = tk::random_symmetric_matrix(&mut rng, n);
                let moves = rng.gen_range(1..=6);
                let b = tk::random_congruent(&mut rng, &a, moves);
                let ia = inertia(&a);
                assert_eq!(ia, inertia(&b), "congruence changed inertia");
                assert_eq!(ia, tk::inertia_via_charpoly(&a), "charpoly oracle disagrees");
            }
        },
    );
}

// --- criterion 10: CLI golden runs ---------------------------------------

fn hkz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkz"))
        .args(args)
        .output()
        .expect("binary spawns")
}

/// Runs the command twice and asserts byte-identical stdout plus the
/// expected exit code; returns the stdout bytes as UTF-8.
fn golden_run(args: &[&str], expected_exit: i32) -> String {
    let first = hkz(args);
    let second = hkz(args);
    assert_eq!(
        first.status.code(),
        Some(expected_exit),
        "args {args:?}, stdout: {}",
        String::from_utf8_lossy(&first.stdout)
    );
    assert_eq!(first.status.code(), second.status.code());
    assert_eq!(first.stdout, second.stdout, "stdout differs across runs: {args:?}");
    assert_eq!(first.stderr, second.stderr, "stderr differs across runs: {args:?}");
    String::from_utf8(first.stdout).expect("stdout is UTF-8")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("test file writes");
    path.to_str().expect("UTF-8 path").to_string()
}

#[test]
fn criterion_10_cli_golden_runs() {
    criterion(
        10,
        "documented CLI examples byte-identical across two consecutive runs",
        || {
            let out = golden_run(&["decompose", "--catalog", "U-basic", "--class", "1,0"], 0);
            assert_eq!(
                out,
                "{\"P\":[\"1/2\",\"1/2\"],\"N\":{\"E\":\"1/2\"},\"rounds\":1,\"diagnostics\":[]}\n"
            );

            let out = golden_run(
                &["decompose", "--catalog", "U-basic", "--class", "1,0", "--check-oracle"],
                0,
            );
            assert_eq!(
                out,
                "{\"P\":[\"1/2\",\"1/2\"],\"N\":{\"E\":\"1/2\"},\"rounds\":1,\"diagnostics\":[],\"oracle_agrees\":true}\n"
            );

            let dir = tempfile::tempdir().expect("tempdir");
            let bad = write_file(
                dir.path(),
                "bad.json",
                r#"{"rank":2,"gram":[["-2","0"],["0","-2"]],"primes":{},"kahler":["1","0"]}"#,
            );
            let out = golden_run(&["validate", "--model", &bad], 2);
            assert!(out.contains("\"SignatureViolation\""), "got: {out}");

            let classes = write_file(dir.path(), "classes.txt", "1,0\n1,-1\n");
            let out = golden_run(&["batch", &classes, "--catalog", "U-basic"], 0);
            assert_eq!(
                out,
                concat!(
                    "{\"P\":[\"1/2\",\"1/2\"],\"N\":{\"E\":\"1/2\"},\"rounds\":1,\"diagnostics\":[]}\n",
                    "{\"P\":[\"0\",\"0\"],\"N\":{\"E\":\"1\"},\"rounds\":1,\"diagnostics\":[]}\n"
                )
            );

            let empty = write_file(dir.path(), "empty.txt", "");
            let out = golden_run(&["batch", &empty, "--catalog", "U-basic"], 0);
            assert!(out.is_empty());

            let mixed = write_file(dir.path(), "mixed.txt", "1,0\n1,x\n1,-1\n");
            let out = golden_run(&["batch", &mixed, "--catalog", "U-basic"], 1);
            let lines: Vec<&str> = out.lines().collect();
            assert_eq!(lines.len(), 3);
            assert!(lines[1].contains("\"ParseError\""));

            let out = golden_run(&["catalog"], 0);
            assert_eq!(out, "[\"U-basic\",\"U-neg2-chain\",\"no-primes\"]\n");
        },
    );
}
