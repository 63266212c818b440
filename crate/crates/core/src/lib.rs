//! Ranking both sides of a two-sided tournament.
//!
//! A tournament is an `m × n` 0/1 matrix where `K[a][b] = 1` means row player
//! `a` beats column player `b`. Operators map a tournament to a pair of total
//! preorders, one per side. Tournaments whose row neighbourhoods are nested
//! (the chain property) have a canonical ranking pair; general tournaments are
//! handled by editing them to nearby chain tournaments, by interleaving
//! selections, or by a threshold likelihood model.

pub mod axiom_lab;
pub mod chain_edit;
pub mod error;
pub mod interleave;
pub mod match_pref;
pub mod operators;
pub mod preorder;
pub mod prob_model;
pub mod tournament;

pub use chain_edit::{EditConfig, MinChainSet};
pub use error::{Error, Result};
pub use preorder::{RankingPair, TotalPreorder};
pub use tournament::Tournament;
