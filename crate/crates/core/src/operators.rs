//! Ranking operators and the name registry.

use std::cmp::Reverse;
use std::fmt;
use std::sync::Arc;

use crate::chain_edit::{min_chain_set, monotone_min_chain, EditConfig};
use crate::error::{Error, Result};
use crate::interleave::{ci_selection, interleave};
use crate::match_pref::{select_match_pref, MatchPreference};
use crate::preorder::{RankingPair, TotalPreorder};
use crate::tournament::Tournament;

/// Maps a tournament to a ranking of each side.
pub trait Operator: Send + Sync {
    fn name(&self) -> String;

    fn rank(&self, k: &Tournament) -> Result<RankingPair>;

    /// Operators that rank through a single chosen chain tournament expose it here.
    fn has_choice(&self) -> bool {
        false
    }

    fn choice(&self, _k: &Tournament) -> Result<Tournament> {
        Err(Error::Configuration(format!(
            "operator '{}' does not rank through a chosen chain tournament",
            self.name()
        )))
    }

    /// Largest supported `min(m, n)`, if limited.
    fn size_cap(&self) -> Option<usize> {
        None
    }
}

impl fmt::Debug for dyn Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({})", self.name())
    }
}

/// Row players by number of wins, column players by number of losses (fewer is better).
#[derive(Clone, Copy, Debug, Default)]
pub struct Count;

impl Operator for Count {
    fn name(&self) -> String {
        "count".into()
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        let wins: Vec<usize> = (0..k.rows()).map(|a| k.row_len(a)).collect();
        let losses: Vec<Reverse<usize>> = (0..k.cols()).map(|b| Reverse(k.col_len(b))).collect();
        Ok(RankingPair::new(
            TotalPreorder::from_keys(&wins),
            TotalPreorder::from_keys(&losses),
        ))
    }
}

/// Canonically least closest chain tournament.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChainMinLex {
    pub config: EditConfig,
}

impl Operator for ChainMinLex {
    fn name(&self) -> String {
        "chain-min-lex".into()
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        self.choice(k)?.chain_rankings()
    }

    fn has_choice(&self) -> bool {
        true
    }

    fn choice(&self, k: &Tournament) -> Result<Tournament> {
        let set = min_chain_set(k, &self.config)?;
        set.members
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("empty closest-chain set".into()))
    }

    fn size_cap(&self) -> Option<usize> {
        Some(self.config.cap)
    }
}

/// Canonically least closest chain tournament preserving the subset order of rows.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChainMinMon {
    pub config: EditConfig,
}

impl Operator for ChainMinMon {
    fn name(&self) -> String {
        "chain-min-mon".into()
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        self.choice(k)?.chain_rankings()
    }

    fn has_choice(&self) -> bool {
        true
    }

    fn choice(&self, k: &Tournament) -> Result<Tournament> {
        monotone_min_chain(k, &self.config)
    }

    fn size_cap(&self) -> Option<usize> {
        Some(self.config.cap)
    }
}

#[derive(Clone, Debug)]
pub struct MatchPref {
    pub pref: MatchPreference,
    pub config: EditConfig,
}

impl Operator for MatchPref {
    fn name(&self) -> String {
        match &self.pref {
            MatchPreference::RowMajor => "match-pref:row-major".into(),
            MatchPreference::ColMajor => "match-pref:col-major".into(),
            MatchPreference::Explicit(cells) => {
                let pairs: Vec<String> = cells
                    .iter()
                    .map(|(a, b)| format!("[{},{}]", a + 1, b + 1))
                    .collect();
                format!("match-pref:[{}]", pairs.join(","))
            }
        }
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        self.choice(k)?.chain_rankings()
    }

    fn has_choice(&self) -> bool {
        true
    }

    fn choice(&self, k: &Tournament) -> Result<Tournament> {
        select_match_pref(k, &self.pref, &self.config)
    }

    fn size_cap(&self) -> Option<usize> {
        Some(self.config.cap)
    }
}

/// Interleaving by remaining wins and losses.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ci;

impl Operator for Ci {
    fn name(&self) -> String {
        "ci".into()
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        Ok(interleave(k, &ci_selection())?.0)
    }
}

/// Applies the base choice on whichever of `K` and its dual comes first in
/// canonical order, and carries the result across the dual otherwise.
pub struct DualSymmetrized {
    base: Arc<dyn Operator>,
}

impl DualSymmetrized {
    pub fn new(base: Arc<dyn Operator>) -> Result<Self> {
        if !base.has_choice() {
            return Err(Error::Configuration(format!(
                "operator '{}' exposes no choice function to symmetrise",
                base.name()
            )));
        }
        Ok(DualSymmetrized { base })
    }
}

impl Operator for DualSymmetrized {
    fn name(&self) -> String {
        if self.base.name() == "chain-min-lex" {
            "chain-min-dual".into()
        } else {
            format!("dual-symmetrized({})", self.base.name())
        }
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        self.choice(k)?.chain_rankings()
    }

    fn has_choice(&self) -> bool {
        true
    }

    fn choice(&self, k: &Tournament) -> Result<Tournament> {
        let d = k.dual();
        if *k < d {
            self.base.choice(k)
        } else {
            Ok(self.base.choice(&d)?.dual())
        }
    }

    fn size_cap(&self) -> Option<usize> {
        self.base.size_cap()
    }
}

/// Every player tied. Test fixture.
#[derive(Clone, Copy, Debug, Default)]
pub struct Flat;

impl Operator for Flat {
    fn name(&self) -> String {
        "flat".into()
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        Ok(RankingPair::new(
            TotalPreorder::flat(k.rows()),
            TotalPreorder::flat(k.cols()),
        ))
    }
}

/// Fewer wins rank higher. Test fixture that breaks monotonicity.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReversedCount;

impl Operator for ReversedCount {
    fn name(&self) -> String {
        "reversed-count".into()
    }

    fn rank(&self, k: &Tournament) -> Result<RankingPair> {
        let wins: Vec<Reverse<usize>> = (0..k.rows()).map(|a| Reverse(k.row_len(a))).collect();
        let losses: Vec<usize> = (0..k.cols()).map(|b| k.col_len(b)).collect();
        Ok(RankingPair::new(
            TotalPreorder::from_keys(&wins),
            TotalPreorder::from_keys(&losses),
        ))
    }
}

/// Names accepted by [`operator_by_name`]; `match-pref:` takes a preference suffix.
pub const OPERATOR_NAMES: &[&str] = &[
    "count",
    "chain-min-lex",
    "chain-min-mon",
    "chain-min-dual",
    "match-pref:<row-major|col-major|json cells>",
    "ci",
];

pub fn operator_by_name(name: &str, config: &EditConfig) -> Result<Arc<dyn Operator>> {
    let config = *config;
    let op: Arc<dyn Operator> = match name {
        "count" => Arc::new(Count),
        "chain-min-lex" => Arc::new(ChainMinLex { config }),
        "chain-min-mon" => Arc::new(ChainMinMon { config }),
        "chain-min-dual" => Arc::new(DualSymmetrized::new(Arc::new(ChainMinLex { config }))?),
        "ci" => Arc::new(Ci),
        other => match other.strip_prefix("match-pref:") {
            Some(pref) => Arc::new(MatchPref {
                pref: MatchPreference::parse(pref)?,
                config,
            }),
            None => {
                return Err(Error::InvalidInput(format!(
                    "unknown operator '{other}'; expected one of {}",
                    OPERATOR_NAMES.join(", ")
                )))
            }
        },
    };
    Ok(op)
}
