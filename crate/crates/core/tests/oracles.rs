mod common;

use common::{all_binary_codes, all_vectors, determines_by_enumeration, power_set, random_matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbc_core::rbc::{find_repair_set, Strategy};
use rbc_core::{determines, lemma1_check, verify_rbc, FieldElem, FieldSpec, LinearCode, RbcParams, VerifyOptions};

#[test]
fn determines_matches_message_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for q in [2usize, 3] {
        let f = FieldSpec::new(q).unwrap();
        for _ in 0..60 {
            let k = rng.gen_range(1..=4);
            let n = rng.gen_range(1..=6);
            if q.pow(k as u32) > 512 {
                continue;
            }
            let code = LinearCode::new(random_matrix(&mut rng, &f, k, n));
            for requested in power_set(k) {
                for repair in power_set(n) {
                    assert_eq!(
                        determines(&code, &requested, &repair).unwrap(),
                        determines_by_enumeration(&code, &requested, &repair),
                        "{code:?} I={requested:?} J={repair:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn in_colspace_matches_coefficient_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [2usize, 3, 4, 5] {
        let f = FieldSpec::new(q).unwrap();
        for _ in 0..40 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(0..=4);
            if q.pow(cols as u32) > 4096 {
                continue;
            }
            let m = random_matrix(&mut rng, &f, rows, cols);
            let reachable: Vec<Vec<FieldElem>> = all_vectors(&f, cols)
                .into_iter()
                .map(|c| {
                    (0..rows)
                        .map(|i| (0..cols).fold(FieldElem::ZERO, |acc, j| f.add(acc, f.mul(m.get(i, j), c[j]))))
                        .collect()
                })
                .collect();
            for v in all_vectors(&f, rows) {
                assert_eq!(m.in_colspace(&v).unwrap(), reachable.contains(&v));
            }
        }
    }
}

/// A repair set smaller than the request can never work: |I| independent unit
/// vectors do not fit in a span of dimension < |I|.
#[test]
fn no_repair_set_smaller_than_the_request() {
    for n in 1..=4 {
        for code in all_binary_codes(2, n) {
            for requested in power_set(2).into_iter().filter(|s| !s.is_empty()) {
                for repair in power_set(n).into_iter().filter(|j| j.len() < requested.len()) {
                    assert!(!determines(&code, &requested, &repair).unwrap());
                }
            }
        }
    }
    let f = FieldSpec::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let code = LinearCode::new(random_matrix(&mut rng, &f, 4, 5));
        for requested in power_set(4).into_iter().filter(|s| !s.is_empty()) {
            for repair in power_set(5).into_iter().filter(|j| j.len() < requested.len()) {
                assert!(!determines(&code, &requested, &repair).unwrap());
            }
        }
    }
}

#[test]
fn lemma1_is_necessary_for_square_repair_sets() {
    let mut exercised = 0;
    for n in 1..=4 {
        for k in 1..=2 {
            for code in all_binary_codes(k, n) {
                for requested in power_set(k) {
                    for repair in power_set(n).into_iter().filter(|j| j.len() == requested.len()) {
                        if determines(&code, &requested, &repair).unwrap() {
                            exercised += 1;
                            assert!(lemma1_check(&code, &requested, &repair).unwrap());
                        }
                    }
                }
            }
        }
    }
    assert!(exercised > 0);

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut positive = 0;
    for i in 0..1000 {
        let q = [2usize, 3, 4][i % 3];
        let f = FieldSpec::new(q).unwrap();
        let k = rng.gen_range(2..=5);
        let n = rng.gen_range(k..=7);
        // sparse columns make determining sets common enough to matter
        let mut g = random_matrix(&mut rng, &f, k, n);
        if rng.gen_bool(0.5) {
            let mut rows = g.to_rows();
            for row in rows.iter_mut() {
                for v in row.iter_mut() {
                    if rng.gen_bool(0.6) {
                        *v = 0;
                    }
                }
            }
            g = rbc_core::Matrix::from_rows(&f, &rows).unwrap();
        }
        let code = LinearCode::new(g);
        let r = rng.gen_range(1..=k);
        let requested: Vec<usize> = rbc_core::subsets::subsets(k, r).next().unwrap();
        for repair in rbc_core::subsets::subsets(n, r) {
            if determines(&code, &requested, &repair).unwrap() {
                positive += 1;
                assert!(lemma1_check(&code, &requested, &repair).unwrap());
            }
        }
    }
    assert!(positive > 50, "only {positive} positive instances");
}

#[test]
fn repair_sets_agree_between_strategies() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let f = FieldSpec::new(rng.gen_range(2..=3)).unwrap();
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=6);
        let code = LinearCode::new(random_matrix(&mut rng, &f, k, n));
        for requested in power_set(k) {
            for erased in power_set(n) {
                let m = requested.len();
                let naive = find_repair_set(&code, &requested, &erased, m, Strategy::Naive).unwrap();
                let fast = find_repair_set(&code, &requested, &erased, m, Strategy::Lemma1).unwrap();
                assert_eq!(naive, fast);
                if let Some(j) = naive {
                    assert!(determines_by_enumeration(&code, &requested, &j));
                    assert!(j.iter().all(|x| !erased.contains(x)));
                }
            }
        }
    }
}

/// Counterexamples re-check: no J of size ≤ m outside D determines x|_I, by
/// the enumeration oracle over every such J.
#[test]
fn counterexamples_are_genuine() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut failures = 0;
    for _ in 0..200 {
        let f = FieldSpec::new(2).unwrap();
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(k..=6);
        let code = LinearCode::new(random_matrix(&mut rng, &f, k, n));
        let r = rng.gen_range(1..=k);
        let m = rng.gen_range(r..=r + 1);
        let d = rng.gen_range(0..=n.min(2));
        let params = RbcParams::new(r, m, d).unwrap();
        let report = verify_rbc(&code, params, &VerifyOptions::default()).unwrap();
        if let Some(c) = report.counterexample {
            failures += 1;
            assert!(!report.holds);
            for j in power_set(n) {
                if j.len() <= m && j.iter().all(|x| !c.erased.contains(x)) {
                    assert!(!determines_by_enumeration(&code, &c.requested, &j));
                }
            }
        } else {
            assert!(report.holds);
        }
    }
    assert!(failures > 10);
}
