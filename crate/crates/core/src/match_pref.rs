//! Match preferences: a total order on cells saying which results the ranker
//! would rather overturn first. Chain-editing ties are broken by picking the
//! closest chain tournament whose changes fall as late as possible in it.

use crate::chain_edit::{min_chain_set, EditConfig};
use crate::error::{Error, Result};
use crate::preorder::RankingPair;
use crate::tournament::Tournament;

/// Largest `m·n` accepted by [`weights_for`]; keeps every weight sum in `u128`.
pub const DEFAULT_BIT_BUDGET: usize = 120;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MatchPreference {
    RowMajor,
    ColMajor,
    /// 0-based cells, earliest = most willing to change.
    Explicit(Vec<(usize, usize)>),
}

impl MatchPreference {
    /// Parses `row-major`, `col-major`, or a JSON list of 1-based `[row, col]` pairs.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "row-major" => Ok(MatchPreference::RowMajor),
            "col-major" => Ok(MatchPreference::ColMajor),
            other => {
                let pairs: Vec<(usize, usize)> = serde_json::from_str(other).map_err(|e| {
                    Error::InvalidInput(format!(
                        "match preference must be row-major, col-major or a JSON list of [row, col] pairs: {e}"
                    ))
                })?;
                let cells = pairs
                    .into_iter()
                    .map(|(r, c)| {
                        if r == 0 || c == 0 {
                            Err(Error::InvalidInput("cell labels are 1-based".into()))
                        } else {
                            Ok((r - 1, c - 1))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(MatchPreference::Explicit(cells))
            }
        }
    }

    /// Cells of an `m × n` tournament in ascending preference order.
    pub fn order(&self, m: usize, n: usize) -> Result<Vec<(usize, usize)>> {
        match self {
            MatchPreference::RowMajor => {
                Ok((0..m).flat_map(|a| (0..n).map(move |b| (a, b))).collect())
            }
            MatchPreference::ColMajor => {
                Ok((0..n).flat_map(|b| (0..m).map(move |a| (a, b))).collect())
            }
            MatchPreference::Explicit(cells) => {
                let mut seen = vec![false; m * n];
                for &(a, b) in cells {
                    if a >= m || b >= n {
                        return Err(Error::InvalidInput(format!(
                            "cell ({}, {}) lies outside a {m}x{n} tournament",
                            a + 1,
                            b + 1
                        )));
                    }
                    if std::mem::replace(&mut seen[a * n + b], true) {
                        return Err(Error::InvalidInput(format!(
                            "cell ({}, {}) listed twice",
                            a + 1,
                            b + 1
                        )));
                    }
                }
                if cells.len() != m * n {
                    return Err(Error::InvalidInput(format!(
                        "explicit order lists {} cells, expected {}",
                        cells.len(),
                        m * n
                    )));
                }
                Ok(cells.clone())
            }
        }
    }

    /// 1-based position of every cell, row-major.
    pub fn positions(&self, m: usize, n: usize) -> Result<Vec<usize>> {
        let mut pos = vec![0; m * n];
        for (i, (a, b)) in self.order(m, n)?.into_iter().enumerate() {
            pos[a * n + b] = i + 1;
        }
        Ok(pos)
    }
}

/// Entries of `k` listed in preference order.
pub fn vectorize(k: &Tournament, pref: &MatchPreference) -> Result<Vec<bool>> {
    Ok(pref
        .order(k.rows(), k.cols())?
        .into_iter()
        .map(|(a, b)| k.get(a, b))
        .collect())
}

/// The closest chain tournament whose difference from `k` is lexicographically least.
pub fn select_match_pref(
    k: &Tournament,
    pref: &MatchPreference,
    config: &EditConfig,
) -> Result<Tournament> {
    let order = pref.order(k.rows(), k.cols())?;
    let set = min_chain_set(k, config)?;
    let mut best: Option<(Vec<bool>, &Tournament)> = None;
    for member in &set.members {
        let diff = k.xor(member)?;
        let v: Vec<bool> = order.iter().map(|&(a, b)| diff.get(a, b)).collect();
        match &best {
            Some((bv, _)) if *bv == v => {
                return Err(Error::Internal(
                    "two closest chain tournaments share a difference vector".into(),
                ))
            }
            Some((bv, _)) if *bv < v => {}
            _ => best = Some((v, member)),
        }
    }
    best.map(|(_, t)| t.clone())
        .ok_or_else(|| Error::Internal("empty closest-chain set".into()))
}

pub fn rank_match_pref(
    k: &Tournament,
    pref: &MatchPreference,
    config: &EditConfig,
) -> Result<RankingPair> {
    select_match_pref(k, pref, config)?.chain_rankings()
}

/// Integer weights `2^(mn) + 2^(mn - p)` where `p` is the 1-based preference
/// position of the cell. Dividing by `2^(mn)` gives `1 + 2^(-p)`.
pub fn weights_for(pref: &MatchPreference, m: usize, n: usize) -> Result<Vec<u128>> {
    weights_with_budget(pref, m, n, DEFAULT_BIT_BUDGET)
}

pub fn weights_with_budget(
    pref: &MatchPreference,
    m: usize,
    n: usize,
    budget: usize,
) -> Result<Vec<u128>> {
    let cells = m * n;
    if cells > budget.min(DEFAULT_BIT_BUDGET) {
        return Err(Error::ResourceCap {
            what: "cell count for exact weights",
            requested: cells,
            limit: budget.min(DEFAULT_BIT_BUDGET),
            hint: "use select_match_pref directly",
        });
    }
    let base = 1u128 << cells;
    Ok(pref
        .positions(m, n)?
        .into_iter()
        .map(|p| base + (1u128 << (cells - p)))
        .collect())
}
