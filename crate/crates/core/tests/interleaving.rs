mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use chainrank::chain_edit::chain_tournaments;
use chainrank::interleave::{
    chain_realizations, ci_selection, ci_selection_counted, interleave, is_chain_definable,
    ranks_to_chain, selection_from_rankings, PlayerSet, SelectionFunctionPair,
};
use chainrank::operators::{ChainMinLex, Operator};
use chainrank::{EditConfig, Tournament};
use common::*;

/// Pure selections of varying greediness that satisfy the contract.
fn selection_pairs() -> Vec<SelectionFunctionPair> {
    let lowest: SelectionFunctionPair = SelectionFunctionPair::new(
        "lowest-index",
        Arc::new(|_, a, b| {
            if b.is_empty() {
                a.clone()
            } else {
                a.iter().take(1).copied().collect()
            }
        }),
        Arc::new(|_, a, b| {
            if a.is_empty() {
                b.clone()
            } else {
                b.iter().take(1).copied().collect()
            }
        }),
    );
    let parity = SelectionFunctionPair::new(
        "parity",
        Arc::new(|_, a, b| {
            let even: PlayerSet = a
                .iter()
                .filter(|&&x| (x + b.len()) % 2 == 0)
                .copied()
                .collect();
            if b.is_empty() || even.is_empty() {
                a.clone()
            } else {
                even
            }
        }),
        Arc::new(|k: &Tournament, a, b| {
            if a.is_empty() {
                return b.clone();
            }
            let wins: PlayerSet = b
                .iter()
                .filter(|&&y| a.iter().all(|&x| !k.get(x, y)))
                .copied()
                .collect();
            if wins.is_empty() {
                b.iter().rev().take(1).copied().collect()
            } else {
                wins
            }
        }),
    );
    vec![ci_selection(), lowest, parity]
}

fn exhaustive_up_to_3x3() -> Vec<Tournament> {
    let mut v = Vec::new();
    for m in 1..=3 {
        for n in 1..=3 {
            v.extend(all(m, n));
        }
    }
    v
}

#[test]
fn interleaved_rank_counts_differ_by_at_most_one() {
    let mut cases = exhaustive_up_to_3x3();
    let mut r = rng(2);
    cases.extend((0..100).map(|_| random_tournament(&mut r, 5, 6)));
    for k in &cases {
        for fg in selection_pairs() {
            let (p, trace) = interleave(k, &fg).unwrap();
            assert!(is_chain_definable(&p), "{} on {k:?}", fg.name());
            assert!(trace.rounds.len() <= k.rows().max(k.cols()) + 1);
            let c = ranks_to_chain(&p).unwrap();
            assert_eq!(c.chain_rankings().unwrap(), p);
        }
    }
}

#[test]
fn trace_removals_partition_both_sides() {
    let mut r = rng(4);
    for _ in 0..100 {
        let k = random_tournament(&mut r, 4, 5);
        for fg in selection_pairs() {
            let (p, trace) = interleave(&k, &fg).unwrap();
            let mut rows = BTreeSet::new();
            let mut cols = BTreeSet::new();
            for (i, round) in trace.rounds.iter().enumerate() {
                assert!(round.f.iter().all(|x| rows.insert(*x)));
                assert!(round.g.iter().all(|y| cols.insert(*y)));
                if let Some(next) = trace.rounds.get(i + 1) {
                    let a: PlayerSet = round.rows.difference(&round.f).copied().collect();
                    let b: PlayerSet = round.cols.difference(&round.g).copied().collect();
                    assert_eq!((a, b), (next.rows.clone(), next.cols.clone()));
                } else {
                    assert_eq!(round.rows, round.f);
                    assert_eq!(round.cols, round.g);
                }
            }
            assert_eq!(rows.len(), k.rows());
            assert_eq!(cols.len(), k.cols());
            // the ranks are exactly the removal batches, latest removed weakest
            let batches: Vec<Vec<usize>> = trace
                .rounds
                .iter()
                .rev()
                .filter(|r| !r.f.is_empty())
                .map(|r| r.f.iter().copied().collect())
                .collect();
            assert_eq!(p.a.ranks(), batches.as_slice());
        }
    }
}

#[test]
fn chain_rankings_round_trip_through_construction() {
    for m in 1..=3 {
        for n in 1..=3 {
            for c in chain_tournaments(m, n, &EditConfig::default()).unwrap() {
                let p = c.chain_rankings().unwrap();
                assert!(is_chain_definable(&p));
                assert_eq!(ranks_to_chain(&p).unwrap().chain_rankings().unwrap(), p);
                let realizations = chain_realizations(&p).unwrap();
                assert!(realizations.contains(&c), "{c:?}");
                for r in realizations {
                    assert_eq!(r.chain_rankings().unwrap(), p);
                }
            }
        }
    }
}

#[test]
fn rank_max_selection_reproduces_definable_operators() {
    let lex = ChainMinLex::default();
    let mut cases = all(2, 2);
    cases.extend(all(2, 3));
    cases.extend(all(3, 2));
    let mut table = BTreeMap::new();
    let mut lex_table = BTreeMap::new();
    for k in &cases {
        table.insert(k.clone(), interleave(k, &ci_selection()).unwrap().0);
        lex_table.insert(k.clone(), lex.rank(k).unwrap());
    }
    for t in [table, lex_table] {
        let fg = selection_from_rankings(t.clone()).unwrap();
        for (k, p) in &t {
            assert_eq!(&interleave(k, &fg).unwrap().0, p, "{k:?}");
        }
    }
}

#[test]
fn ci_work_is_polynomial() {
    let mut r = rng(50);
    for _ in 0..5 {
        let k = random_tournament(&mut r, 50, 50);
        let counter = Arc::new(AtomicU64::new(0));
        let (_, trace) = interleave(&k, &ci_selection_counted(Arc::clone(&counter))).unwrap();
        let size = (k.rows() + k.cols()) as u64;
        assert!(trace.rounds.len() as u64 <= size);
        assert!(counter.load(Ordering::Relaxed) <= trace.rounds.len() as u64 * size * size);
    }
}
