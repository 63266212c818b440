//! Total preorders in ordered-partition form.
//!
//! A [`TotalPreorder`] over players `0..len` is stored as its list of ranks
//! (equivalence classes), weakest rank first. Each rank is kept sorted, so two
//! preorders are equal exactly when they relate the same pairs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TotalPreorder {
    ranks: Vec<Vec<usize>>,
    rank_of: Vec<usize>,
}

impl TotalPreorder {
    /// Builds a preorder from explicit ranks, weakest first.
    pub fn new(len: usize, ranks: Vec<Vec<usize>>) -> Result<Self> {
        let mut rank_of = vec![usize::MAX; len];
        let mut ranks = ranks;
        for (i, rank) in ranks.iter_mut().enumerate() {
            if rank.is_empty() {
                return Err(Error::InvalidInput(format!("rank {i} is empty")));
            }
            rank.sort_unstable();
            for &p in rank.iter() {
                if p >= len {
                    return Err(Error::OutOfRange {
                        what: "player",
                        index: p,
                        size: len,
                    });
                }
                if rank_of[p] != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "player {p} appears in more than one rank"
                    )));
                }
                rank_of[p] = i;
            }
        }
        if let Some(missing) = rank_of.iter().position(|&r| r == usize::MAX) {
            return Err(Error::InvalidInput(format!(
                "player {missing} is not ranked"
            )));
        }
        Ok(TotalPreorder { ranks, rank_of })
    }

    /// Groups players by key; a smaller key means a weaker rank.
    pub fn from_keys<K: Ord>(keys: &[K]) -> Self {
        let mut groups: BTreeMap<&K, Vec<usize>> = BTreeMap::new();
        for (p, k) in keys.iter().enumerate() {
            groups.entry(k).or_default().push(p);
        }
        let ranks: Vec<Vec<usize>> = groups.into_values().collect();
        let mut rank_of = vec![0; keys.len()];
        for (i, rank) in ranks.iter().enumerate() {
            for &p in rank {
                rank_of[p] = i;
            }
        }
        TotalPreorder { ranks, rank_of }
    }

    /// Every player tied.
    pub fn flat(len: usize) -> Self {
        assert!(len > 0, "a preorder needs at least one player");
        TotalPreorder {
            ranks: vec![(0..len).collect()],
            rank_of: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.rank_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank_of.is_empty()
    }

    /// Number of rank classes.
    pub fn rank_count(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    /// Index of the rank holding `p`; 0 is the weakest.
    pub fn rank_of(&self, p: usize) -> usize {
        self.rank_of[p]
    }

    /// `x` is ranked at most as strong as `y`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.rank_of[x] <= self.rank_of[y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.rank_of[x] < self.rank_of[y]
    }

    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.rank_of[x] == self.rank_of[y]
    }

    /// The strongest members of `subset` (empty for an empty subset).
    pub fn max_of<'a, I>(&self, subset: I) -> Vec<usize>
    where
        I: IntoIterator<Item = &'a usize>,
    {
        let mut best: Option<usize> = None;
        let mut out = Vec::new();
        for &p in subset {
            let r = self.rank_of[p];
            match best {
                Some(b) if r < b => {}
                Some(b) if r == b => out.push(p),
                _ => {
                    best = Some(r);
                    out.clear();
                    out.push(p);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Relabels players: player `p` becomes `perm[p]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let ranks = self
            .ranks
            .iter()
            .map(|r| r.iter().map(|&p| perm[p]).collect())
            .collect();
        TotalPreorder::new(self.len(), ranks).expect("relabelling by a permutation")
    }
}

impl std::fmt::Debug for TotalPreorder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.ranks.iter()).finish()
    }
}

/// Rankings of both sides: `a` over the row players, `b` over the column players.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankingPair {
    pub a: TotalPreorder,
    pub b: TotalPreorder,
}

impl RankingPair {
    pub fn new(a: TotalPreorder, b: TotalPreorder) -> Self {
        RankingPair { a, b }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.a.len(), self.b.len())
    }
}
