use std::collections::BTreeSet;

use num_bigint::BigUint;
use sandpile_lab::complete::{embed_staircase, phi_kn, psi_kn};
use sandpile_lab::enumeration::{
    count_pattern, count_polyominoes, cyc_matches, cyc_set, enumerate_pattern, lgv_determinant,
    pattern_word, PatternKind,
};
use sandpile_lab::frames::{cyclic_part, polyomino_of_part};
use sandpile_lab::graph::{is_parking, is_recurrent, topple, Graph};
use sandpile_lab::{BinomialWord, CompleteConfig, Limits, Step};

#[test]
fn formula_matches_brute_force() {
    let limits = Limits::default();
    for s in 2..=10 {
        for m in 1..s {
            let r = count_polyominoes(m, s - m, true, &limits).unwrap();
            assert!(r.agreement(), "{m} x {}", s - m);
        }
    }
}

#[test]
fn determinant_matches_product() {
    for m in 1..=30 {
        for n in 1..=30 {
            let product = sandpile_lab::enumeration::count_polyominoes_formula(m, n).unwrap();
            assert_eq!(lgv_determinant(m, n), product.into());
        }
    }
}

#[test]
fn complement_symmetry_of_double_patterns() {
    let limits = Limits::default();
    for (a, b, c) in [(1, 2, 1), (1, 3, 1), (2, 3, 1), (1, 2, 2)] {
        let p = pattern_word(a, b, c, PatternKind::Double);
        let q = pattern_word(b, a, c, PatternKind::Double);
        assert_eq!(
            enumerate_pattern(&p, &limits).unwrap().len(),
            enumerate_pattern(&q, &limits).unwrap().len()
        );
        assert!(count_pattern(a, b, c, PatternKind::Double, true, &limits)
            .unwrap()
            .agreement());
    }
}

#[test]
fn restricted_cyclic_lemma() {
    let limits = Limits::default();
    for (a, b, c) in [(1, 1, 3), (2, 1, 2), (1, 2, 2), (2, 2, 1), (3, 1, 2)] {
        let p = pattern_word(a, b, c, PatternKind::Simple);
        let (m, n) = (c * a, c * b);
        let cyc = cyc_set(&p).unwrap();
        let mut selected = BTreeSet::new();
        for u in BinomialWord::all(m - 1, n - 1) {
            for l in &cyc {
                let part = cyclic_part(&u, l).unwrap();
                assert!(part.iter().all(|(_, k)| cyc.contains(k)));
                let poly = polyomino_of_part(&u, l).unwrap();
                assert_eq!(poly.lower(), &p);
                selected.insert(poly);
            }
        }
        let brute: BTreeSet<_> = enumerate_pattern(&p, &limits)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(selected, brute, "pattern {p}");
    }
}

#[test]
fn cyc_matches_is_a_rotation_test() {
    let p: BinomialWord = "EENENN".parse().unwrap();
    for w in BinomialWord::all(2, 3) {
        let ew = w.wrapped(Some(Step::E), None);
        let rotation = (0..ew.len()).any(|i| ew.rotate_left(i) == p);
        assert_eq!(cyc_matches(&w, &p).unwrap(), rotation);
    }
}

#[test]
fn pattern_reports() {
    let r = count_pattern(1, 1, 3, PatternKind::Simple, true, &Limits::default()).unwrap();
    assert_eq!(r.formula, BigUint::from(2u32));
    assert!(r.agreement());
    assert_eq!(r.to_json()["kind"], "simple");
}

#[test]
fn kn_fixed_points_are_parking_and_recurrent() {
    for n in 2..=6 {
        let g = Graph::complete(n).unwrap();
        for v in CompleteConfig::all_sorted_stable(n).unwrap() {
            let c = v.to_configuration();
            assert_eq!(phi_kn(&v).unwrap().config == v, is_parking(&g, &c).unwrap());
            assert_eq!(
                psi_kn(&v).unwrap().config == v,
                is_recurrent(&g, &c).unwrap()
            );
        }
    }
}

#[test]
fn kn_operators_are_inverse_off_fixed_points() {
    for n in 2..=6 {
        for v in CompleteConfig::all_sorted_stable(n).unwrap() {
            let down = phi_kn(&v).unwrap().config;
            if down != v {
                assert_eq!(psi_kn(&down).unwrap().config, v);
            }
            let up = psi_kn(&v).unwrap().config;
            if up != v {
                assert_eq!(phi_kn(&up).unwrap().config, v);
            }
        }
    }
}

#[test]
fn staircase_double_toppling() {
    // toppling v_i and then the full sink-side vertex holding n−1 keeps the
    // non-sink part a permutation of residues
    for n in 2..=5 {
        let g = Graph::complete_bipartite(n, n).unwrap();
        for v in CompleteConfig::all_sorted_stable(n).unwrap() {
            let u = embed_staircase(&v).unwrap();
            assert!(u.is_zero_free());
            let c = u.to_configuration();
            let Some(j) = (n + 1..2 * n).find(|&j| c.heights[j - 1] == n as i64 - 1) else {
                continue;
            };
            for i in 1..=n {
                let d = topple(&g, &topple(&g, &c, i).unwrap(), j).unwrap();
                let mut residues: Vec<i64> = d.heights[..n]
                    .iter()
                    .map(|h| h.rem_euclid(n as i64))
                    .collect();
                residues.sort_unstable();
                assert_eq!(residues, (0..n as i64).collect::<Vec<_>>());
            }
        }
    }
}
