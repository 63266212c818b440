//! Interleaving: repeatedly remove the strongest remaining rows and columns.
//!
//! Each round asks a selection pair which rows and which columns to remove
//! next; a player removed in an earlier round ranks higher. Selection
//! functions are user supplied, so every call is checked against the
//! selection contract before its output is used.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::preorder::{RankingPair, TotalPreorder};
use crate::tournament::Tournament;

pub type PlayerSet = BTreeSet<usize>;

/// `(K, remaining rows, remaining columns) -> selected players`. Must be pure.
pub type SelectFn = Arc<dyn Fn(&Tournament, &PlayerSet, &PlayerSet) -> PlayerSet + Send + Sync>;

/// A row selection `f` and a column selection `g`.
#[derive(Clone)]
pub struct SelectionFunctionPair {
    name: String,
    f: SelectFn,
    g: SelectFn,
}

impl fmt::Debug for SelectionFunctionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelectionFunctionPair")
            .field("name", &self.name)
            .finish()
    }
}

impl SelectionFunctionPair {
    pub fn new(name: impl Into<String>, f: SelectFn, g: SelectFn) -> Self {
        SelectionFunctionPair {
            name: name.into(),
            f,
            g,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn contract(&self, clause: &'static str, round: usize) -> Error {
        Error::Contract {
            name: self.name.clone(),
            clause,
            round,
        }
    }

    /// Row selection, checked.
    pub fn select_rows(
        &self,
        k: &Tournament,
        a: &PlayerSet,
        b: &PlayerSet,
        round: usize,
    ) -> Result<PlayerSet> {
        let out = (self.f)(k, a, b);
        if !out.is_subset(a) {
            return Err(self.contract("f must select a subset of the remaining rows", round));
        }
        if !a.is_empty() && out.is_empty() {
            return Err(self.contract("f must select some row while rows remain", round));
        }
        if b.is_empty() && out != *a {
            return Err(self.contract(
                "f must select every remaining row once no columns remain",
                round,
            ));
        }
        Ok(out)
    }

    /// Column selection, checked.
    pub fn select_cols(
        &self,
        k: &Tournament,
        a: &PlayerSet,
        b: &PlayerSet,
        round: usize,
    ) -> Result<PlayerSet> {
        let out = (self.g)(k, a, b);
        if !out.is_subset(b) {
            return Err(self.contract("g must select a subset of the remaining columns", round));
        }
        if !b.is_empty() && out.is_empty() {
            return Err(self.contract("g must select some column while columns remain", round));
        }
        if a.is_empty() && out != *b {
            return Err(self.contract(
                "g must select every remaining column once no rows remain",
                round,
            ));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub rows: PlayerSet,
    pub cols: PlayerSet,
    pub f: PlayerSet,
    pub g: PlayerSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleaveTrace {
    pub rounds: Vec<Round>,
    /// Removal round of each row.
    pub r: Vec<usize>,
    /// Removal round of each column.
    pub s: Vec<usize>,
}

pub fn interleave(
    k: &Tournament,
    fg: &SelectionFunctionPair,
) -> Result<(RankingPair, InterleaveTrace)> {
    let (m, n) = k.shape();
    let mut a: PlayerSet = (0..m).collect();
    let mut b: PlayerSet = (0..n).collect();
    let mut r = vec![0; m];
    let mut s = vec![0; n];
    let mut rounds = Vec::new();
    while !a.is_empty() || !b.is_empty() {
        let i = rounds.len();
        let f = fg.select_rows(k, &a, &b, i)?;
        let g = fg.select_cols(k, &a, &b, i)?;
        for &x in &f {
            r[x] = i;
        }
        for &y in &g {
            s[y] = i;
        }
        let next_a = a.difference(&f).copied().collect();
        let next_b = b.difference(&g).copied().collect();
        rounds.push(Round {
            rows: std::mem::replace(&mut a, next_a),
            cols: std::mem::replace(&mut b, next_b),
            f,
            g,
        });
    }
    let key_a: Vec<Reverse<usize>> = r.iter().map(|&x| Reverse(x)).collect();
    let key_b: Vec<Reverse<usize>> = s.iter().map(|&x| Reverse(x)).collect();
    let pair = RankingPair::new(
        TotalPreorder::from_keys(&key_a),
        TotalPreorder::from_keys(&key_b),
    );
    Ok((pair, InterleaveTrace { rounds, r, s }))
}

fn arg_best<F>(set: &PlayerSet, score: F, max: bool) -> PlayerSet
where
    F: Fn(usize) -> usize,
{
    let mut best: Option<usize> = None;
    let mut out = PlayerSet::new();
    for &x in set {
        let v = score(x);
        let better = match best {
            None => true,
            Some(bv) => (max && v > bv) || (!max && v < bv),
        };
        if better {
            best = Some(v);
            out.clear();
        }
        if best == Some(v) {
            out.insert(x);
        }
    }
    out
}

fn ci_pair(counter: Option<Arc<AtomicU64>>) -> SelectionFunctionPair {
    let cf = counter.clone();
    let f: SelectFn = Arc::new(move |k, a, b| {
        if let Some(c) = &cf {
            c.fetch_add((a.len() * b.len().max(1)) as u64, Ordering::Relaxed);
        }
        arg_best(a, |x| b.iter().filter(|&&y| k.get(x, y)).count(), true)
    });
    let g: SelectFn = Arc::new(move |k, a, b| {
        if let Some(c) = &counter {
            c.fetch_add((b.len() * a.len().max(1)) as u64, Ordering::Relaxed);
        }
        arg_best(b, |y| a.iter().filter(|&&x| k.get(x, y)).count(), false)
    });
    SelectionFunctionPair::new("ci", f, g)
}

/// Most wins among remaining columns for rows, fewest losses among remaining
/// rows for columns. Ties are kept whole.
pub fn ci_selection() -> SelectionFunctionPair {
    ci_pair(None)
}

/// Like [`ci_selection`], adding the number of cell reads to `counter`.
pub fn ci_selection_counted(counter: Arc<AtomicU64>) -> SelectionFunctionPair {
    ci_pair(Some(counter))
}

/// Selects everything at once; yields flat rankings.
pub fn take_all_selection() -> SelectionFunctionPair {
    SelectionFunctionPair::new(
        "take-all",
        Arc::new(|_, a, _| a.clone()),
        Arc::new(|_, _, b| b.clone()),
    )
}

/// Rank counts differ by at most one.
pub fn is_chain_definable(p: &RankingPair) -> bool {
    p.a.rank_count().abs_diff(p.b.rank_count()) <= 1
}

fn check_definable(p: &RankingPair) -> Result<()> {
    if is_chain_definable(p) {
        Ok(())
    } else {
        Err(Error::NotChainDefinable {
            a_ranks: p.a.rank_count(),
            b_ranks: p.b.rank_count(),
        })
    }
}

/// Rows of rank `i` (weakest is 1) beat the columns of the `shift(i)` weakest column ranks.
fn realize(p: &RankingPair, lower: bool) -> Tournament {
    let (m, n) = p.shape();
    let mut k = Tournament::zeros(m, n).expect("rankings are non-empty");
    let col_ranks = p.b.ranks();
    for (i, rank) in p.a.ranks().iter().enumerate() {
        let upto = if lower { i } else { i + 1 };
        for y in col_ranks.iter().take(upto) {
            for &row in rank {
                for &col in y {
                    k.set(row, col, true);
                }
            }
        }
    }
    k
}

/// The chain tournament whose rankings are `p`: rows of the `i`-th weakest
/// rank beat exactly the `i` weakest column ranks, or the `i - 1` weakest
/// when there is one more row rank than column ranks.
pub fn ranks_to_chain(p: &RankingPair) -> Result<Tournament> {
    check_definable(p)?;
    Ok(realize(p, p.a.rank_count() == p.b.rank_count() + 1))
}

/// Every chain tournament whose rankings are `p`: two when the rank counts
/// are equal, one otherwise.
pub fn chain_realizations(p: &RankingPair) -> Result<Vec<Tournament>> {
    check_definable(p)?;
    let (s, t) = (p.a.rank_count(), p.b.rank_count());
    let mut out = if s == t {
        vec![realize(p, false), realize(p, true)]
    } else {
        vec![realize(p, s == t + 1)]
    };
    out.sort();
    Ok(out)
}

/// Fewest cell changes turning `k` into a chain tournament ranked as `p`.
pub fn edit_cost(k: &Tournament, p: &RankingPair) -> Result<usize> {
    if p.shape() != k.shape() {
        return Err(Error::DimensionMismatch {
            expected: k.shape(),
            found: p.shape(),
        });
    }
    chain_realizations(p)?
        .iter()
        .map(|c| k.hamming(c))
        .try_fold(usize::MAX, |acc, d| d.map(|d| acc.min(d)))
}

/// Chain tournament read off a trace: each row removed in a round beats
/// exactly the columns still present in that round.
pub fn greedy_chain(k: &Tournament, trace: &InterleaveTrace) -> Tournament {
    let mut out = Tournament::zeros(k.rows(), k.cols()).expect("non-empty shape");
    for round in &trace.rounds {
        for &a in &round.f {
            for &b in &round.cols {
                out.set(a, b, true);
            }
        }
    }
    out
}

/// Rank-max selections reproducing a table of chain-definable rankings.
/// Tournaments missing from the table get flat rankings.
pub fn selection_from_rankings(
    table: BTreeMap<Tournament, RankingPair>,
) -> Result<SelectionFunctionPair> {
    for (k, p) in &table {
        if p.shape() != k.shape() {
            return Err(Error::DimensionMismatch {
                expected: k.shape(),
                found: p.shape(),
            });
        }
        check_definable(p)?;
    }
    let table = Arc::new(table);
    let tf = Arc::clone(&table);
    let f: SelectFn = Arc::new(move |k, a, b| match tf.get(k) {
        Some(p) if !b.is_empty() => p.a.max_of(a).into_iter().collect(),
        _ => a.clone(),
    });
    let g: SelectFn = Arc::new(move |k, a, b| match table.get(k) {
        Some(p) if !a.is_empty() => p.b.max_of(b).into_iter().collect(),
        _ => b.clone(),
    });
    Ok(SelectionFunctionPair::new("rank-max", f, g))
}
