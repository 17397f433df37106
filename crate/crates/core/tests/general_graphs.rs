use std::cmp::Ordering;

use proptest::prelude::*;
use sandpile_lab::graph::{
    compare_lt2, distance_profile, is_parking, is_recurrent, is_stable, stable_configurations,
    topple,
};
use sandpile_lab::operators::{normalize, phi, phi_with_subset, psi, psi_with_subset, Target};
use sandpile_lab::reference::{
    example_graph, parking_by_subsets, phi_by_scan, psi_by_scan, random_connected_graph,
    recurrent_by_orders, small_graph_family, ClassKey,
};
use sandpile_lab::{Configuration, Graph, Limits};

fn cfg(h: &[i64]) -> Configuration {
    Configuration::new(h.to_vec())
}

#[test]
fn fast_tests_match_oracles_on_small_family() {
    for g in small_graph_family() {
        for c in stable_configurations(&g) {
            assert_eq!(
                is_recurrent(&g, &c).unwrap(),
                recurrent_by_orders(&g, &c).unwrap()
            );
            assert_eq!(
                is_parking(&g, &c).unwrap(),
                parking_by_subsets(&g, &c).unwrap()
            );
        }
    }
}

#[test]
fn bitmask_scan_matches_plain_scan() {
    let limits = Limits::default();
    for g in small_graph_family() {
        for c in stable_configurations(&g) {
            assert_eq!(
                psi_with_subset(&g, &c, &limits).unwrap(),
                psi_by_scan(&g, &c).unwrap()
            );
            assert_eq!(
                phi_with_subset(&g, &c, &limits).unwrap(),
                phi_by_scan(&g, &c).unwrap()
            );
        }
    }
}

/// The distance profile with the sink shell restored. Toppling conserves
/// grains, so the sink holds a fixed total minus the non-sink height.
fn full_profile(g: &Graph, c: &Configuration) -> Vec<i64> {
    let mut out = vec![-c.height()];
    out.extend(distance_profile(g, c).unwrap().counts);
    out
}

#[test]
fn lt2_ignores_the_sink_shell() {
    let g = example_graph();
    let a = cfg(&[0, 0, 2, 0, 2, 2]);
    let b = cfg(&[1, 1, 0, 0, 2, 2]);
    assert_eq!(compare_lt2(&g, &b, &a).unwrap(), Ordering::Less);
    assert_eq!(compare_lt2(&g, &a, &a).unwrap(), Ordering::Equal);
}

#[test]
fn operators_move_monotonically_and_stay_in_class() {
    for g in small_graph_family() {
        let keys = ClassKey::new(&g);
        for c in stable_configurations(&g) {
            let up = psi(&g, &c).unwrap();
            let down = phi(&g, &c).unwrap();
            assert_eq!(keys.key(&up), keys.key(&c));
            assert_eq!(keys.key(&down), keys.key(&c));
            if up != c {
                assert_eq!(
                    full_profile(&g, &up).cmp(&full_profile(&g, &c)),
                    Ordering::Less,
                    "{c}"
                );
            }
            if down != c {
                assert_eq!(
                    full_profile(&g, &c).cmp(&full_profile(&g, &down)),
                    Ordering::Less,
                    "{c}"
                );
            }
        }
    }
}

#[test]
fn psi_is_not_injective_on_the_example() {
    let g = example_graph();
    let a = cfg(&[0, 0, 2, 0, 2, 2]);
    let b = cfg(&[1, 1, 0, 2, 0, 0]);
    assert_ne!(a, b);
    assert_eq!(psi(&g, &a).unwrap(), psi(&g, &b).unwrap());
}

#[test]
fn normalize_reaches_fixed_points() {
    let limits = Limits::default();
    for g in small_graph_family().into_iter().take(30) {
        let bound = stable_configurations(&g).len();
        for c in stable_configurations(&g) {
            let r = normalize(&g, &c, Target::Recurrent, true, &limits).unwrap();
            assert!(r.steps < bound);
            assert!(is_recurrent(&g, &r.fixed_point).unwrap());
            assert_eq!(r.trajectory.unwrap().len(), r.steps + 1);
            let p = normalize(&g, &c, Target::Parking, false, &limits).unwrap();
            assert!(is_parking(&g, &p.fixed_point).unwrap());
        }
    }
}

#[test]
fn subset_scan_is_capped() {
    let g = Graph::complete(8).unwrap();
    let c = Configuration::zero(7);
    let tight = Limits {
        general_vertex_cap: 6,
        ..Limits::default()
    };
    assert!(psi_with_subset(&g, &c, &tight).is_err());
    assert!(psi_with_subset(&g, &c, &Limits::default()).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn toppling_everything_is_identity(
        vertices in 2usize..=8,
        seed in any::<u64>(),
        heights in proptest::collection::vec(-5i64..10, 7),
    ) {
        let g = random_connected_graph(vertices, seed);
        let c = Configuration::new(heights[..vertices - 1].to_vec());
        let mut cur = c.clone();
        for v in 1..=vertices {
            cur = topple(&g, &cur, v).unwrap();
        }
        prop_assert_eq!(cur, c);
    }

    #[test]
    fn psi_and_phi_land_on_stable_configurations(
        vertices in 2usize..=7,
        seed in any::<u64>(),
        pick in any::<proptest::sample::Index>(),
    ) {
        let g = random_connected_graph(vertices, seed);
        let all = stable_configurations(&g);
        let c = &all[pick.index(all.len())];
        prop_assert!(is_stable(&g, &psi(&g, c).unwrap()));
        prop_assert!(is_stable(&g, &phi(&g, c).unwrap()));
    }
}
