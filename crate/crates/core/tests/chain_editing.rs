mod common;

use chainrank::chain_edit::{
    brute_force_min_chain, chain_completion, chain_deletion, extend_monotone, extends_subset_order,
    min_chain_distance, min_chain_set, monotone_min_chain, weighted_distance, weighted_min_chain,
};
use chainrank::match_pref::{select_match_pref, vectorize, weights_for, MatchPreference};
use chainrank::{EditConfig, Tournament};
use common::*;

fn cfg() -> EditConfig {
    EditConfig::default()
}

fn small_exhaustive() -> Vec<Tournament> {
    let mut v = all(2, 2);
    v.extend(all(2, 3));
    v
}

fn random_medium(count: usize, seed: u64) -> Vec<Tournament> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = if i % 2 == 0 { 3 } else { 4 };
            random_tournament(&mut r, 3, n)
        })
        .collect()
}

#[test]
fn solver_matches_naive_scan_exhaustively() {
    for k in small_exhaustive() {
        let set = min_chain_set(&k, &cfg()).unwrap();
        let (d, members) = naive_closest(&k);
        assert_eq!(set.distance, d, "{k:?}");
        assert_eq!(set.members, members, "{k:?}");
        assert_eq!(brute_force_min_chain(&k).unwrap(), set);
        assert_eq!(min_chain_distance(&k, &cfg()).unwrap(), d);
    }
}

#[test]
fn solver_matches_brute_force_on_random_instances() {
    for k in random_medium(200, 11) {
        let set = min_chain_set(&k, &cfg()).unwrap();
        assert_eq!(brute_force_min_chain(&k).unwrap(), set, "{k:?}");
        assert_eq!(min_chain_distance(&k, &cfg()).unwrap(), set.distance);
    }
}

#[test]
fn wide_inputs_are_solved_through_the_dual() {
    let mut r = rng(5);
    for _ in 0..20 {
        let k = random_tournament(&mut r, 2, 7);
        let set = min_chain_set(&k, &cfg()).unwrap();
        assert_eq!(set, brute_force_min_chain(&k).unwrap(), "{k:?}");
    }
}

#[test]
fn closest_sets_correspond_under_dual() {
    for k in small_exhaustive() {
        let set = min_chain_set(&k, &cfg()).unwrap();
        let mut mapped: Vec<Tournament> = set.members.iter().map(Tournament::dual).collect();
        mapped.sort();
        let dual_set = min_chain_set(&k.dual(), &cfg()).unwrap();
        assert_eq!(mapped, dual_set.members, "{k:?}");
        assert_eq!(set.distance, dual_set.distance);
    }
}

#[test]
fn closest_sets_commute_with_relabelling() {
    let mut r = rng(17);
    for k in random_medium(60, 3) {
        let sigma = random_perm(&mut r, k.rows());
        let pi = random_perm(&mut r, k.cols());
        let mut mapped: Vec<Tournament> = min_chain_set(&k, &cfg())
            .unwrap()
            .members
            .iter()
            .map(|c| c.permute(&sigma, &pi).unwrap())
            .collect();
        mapped.sort();
        let direct = min_chain_set(&k.permute(&sigma, &pi).unwrap(), &cfg()).unwrap();
        assert_eq!(mapped, direct.members);
    }
}

fn swap_keeps_closest_on(k: &Tournament) {
    let set = min_chain_set(k, &cfg()).unwrap();
    for a1 in 0..k.rows() {
        for a2 in 0..k.rows() {
            if a1 == a2 || !k.row_subset(a1, a2) {
                continue;
            }
            for c in &set.members {
                if c.row_subset(a2, a1) {
                    let swapped = c.swap_rows(a1, a2).unwrap();
                    assert!(set.contains(&swapped), "{k:?} {c:?} rows {a1} {a2}");
                }
            }
        }
    }
}

#[test]
fn swapping_against_the_subset_order_stays_closest() {
    for k in small_exhaustive() {
        swap_keeps_closest_on(&k);
    }
    let mut r = rng(23);
    for _ in 0..100 {
        swap_keeps_closest_on(&random_tournament(&mut r, 3, 3));
    }
}

#[test]
fn monotone_selection_is_closest_and_order_preserving() {
    let mut cases = small_exhaustive();
    cases.extend(all(3, 3));
    for k in cases {
        let m = monotone_min_chain(&k, &cfg()).unwrap();
        let set = min_chain_set(&k, &cfg()).unwrap();
        assert!(set.contains(&m));
        assert!(extends_subset_order(&k, &m));
        for c in &set.members {
            let repaired = extend_monotone(&k, c).unwrap();
            assert!(set.contains(&repaired));
            assert!(extends_subset_order(&k, &repaired));
        }
    }
}

#[test]
fn three_by_four_monotone_choice_is_least_qualifying_member() {
    let k = three_by_four();
    let set = min_chain_set(&k, &cfg()).unwrap();
    let qualifying: Vec<&Tournament> = set
        .members
        .iter()
        .filter(|c| extends_subset_order(&k, c))
        .collect();
    assert_eq!(monotone_min_chain(&k, &cfg()).unwrap(), *qualifying[0]);
}

#[test]
fn completion_and_deletion_respect_direction() {
    for k in small_exhaustive() {
        let comp = chain_completion(&k, &cfg()).unwrap();
        let (d, expected) = naive_closest_by(&k, |o, c| o.iter().zip(c).all(|(x, y)| x & y == *x));
        assert_eq!((comp.distance, &comp.members), (d, &expected), "{k:?}");
        for c in &comp.members {
            assert!(k.is_cellwise_le(c) && c.has_chain_property());
        }
        let del = chain_deletion(&k, &cfg()).unwrap();
        let (d, expected) = naive_closest_by(&k, |o, c| o.iter().zip(c).all(|(x, y)| x & y == *y));
        assert_eq!((del.distance, &del.members), (d, &expected), "{k:?}");
        for c in &del.members {
            assert!(c.is_cellwise_le(&k) && c.has_chain_property());
        }
    }
}

fn explicit_orders(m: usize, n: usize, count: usize, seed: u64) -> Vec<MatchPreference> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let p = random_perm(&mut r, m * n);
            MatchPreference::Explicit(p.into_iter().map(|i| (i / n, i % n)).collect())
        })
        .collect()
}

fn orders(m: usize, n: usize) -> Vec<MatchPreference> {
    let mut v = vec![MatchPreference::RowMajor, MatchPreference::ColMajor];
    v.extend(explicit_orders(m, n, 5, (m * 10 + n) as u64));
    v
}

#[test]
fn weighted_search_equals_lexicographic_selection() {
    let mut cases = vec![];
    for (m, n) in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (2, 3), (3, 2)] {
        cases.extend(all(m, n));
    }
    let mut r = rng(31);
    cases.extend((0..40).map(|_| random_tournament(&mut r, 3, 3)));
    for k in cases {
        for pref in orders(k.rows(), k.cols()) {
            let w = weights_for(&pref, k.rows(), k.cols()).unwrap();
            let weighted = weighted_min_chain(&k, &w, &cfg()).unwrap();
            let lex = select_match_pref(&k, &pref, &cfg()).unwrap();
            assert_eq!(weighted, lex, "{k:?} {pref:?}");
        }
    }
}

#[test]
fn weight_order_matches_vector_order() {
    let mut cases = all(2, 2);
    cases.extend(all(2, 3));
    for k in cases {
        let set = min_chain_set(&k, &cfg()).unwrap();
        for pref in orders(k.rows(), k.cols()) {
            let w = weights_for(&pref, k.rows(), k.cols()).unwrap();
            for k1 in &set.members {
                for k2 in &set.members {
                    if k1 == k2 {
                        continue;
                    }
                    let v1 = vectorize(&k.xor(k1).unwrap(), &pref).unwrap();
                    let v2 = vectorize(&k.xor(k2).unwrap(), &pref).unwrap();
                    let d1 = weighted_distance(&k, k1, &w).unwrap();
                    let d2 = weighted_distance(&k, k2, &w).unwrap();
                    assert_eq!(v1 < v2, d1 < d2);
                }
            }
        }
    }
}

#[test]
fn lexicographic_selection_is_closest() {
    for k in random_medium(50, 41) {
        let set = min_chain_set(&k, &cfg()).unwrap();
        for pref in orders(k.rows(), k.cols()) {
            assert!(set.contains(&select_match_pref(&k, &pref, &cfg()).unwrap()));
        }
    }
}

#[test]
fn weighted_two_by_two_diagonal_oracle() {
    // exhaustive weighted scan with the scaled row-major weights
    let k = t(&[&[1, 0], &[0, 1]]);
    let w = weights_for(&MatchPreference::RowMajor, 2, 2).unwrap();
    let best = all(2, 2)
        .into_iter()
        .filter(Tournament::has_chain_property)
        .min_by_key(|c| weighted_distance(&k, c, &w).unwrap())
        .unwrap();
    assert_eq!(best, t(&[&[1, 0], &[0, 0]]));
    assert_eq!(weighted_min_chain(&k, &w, &cfg()).unwrap(), best);
}

#[test]
fn three_by_four_weighted_selection_is_the_row_major_pick() {
    let w = weights_for(&MatchPreference::RowMajor, 3, 4).unwrap();
    assert_eq!(
        weighted_min_chain(&three_by_four(), &w, &cfg()).unwrap(),
        t(&[&[1, 0, 1, 0], &[1, 1, 1, 0], &[1, 1, 1, 1]])
    );
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let ks = random_medium(20, 77);
    let reference: Vec<_> = ks
        .iter()
        .map(|k| min_chain_set(k, &cfg()).unwrap())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let single: Vec<_> = pool.install(|| {
        ks.iter()
            .map(|k| min_chain_set(k, &cfg()).unwrap())
            .collect()
    });
    assert_eq!(reference, single);
}
