//! Executable axioms for ranking operators.
//!
//! Every check runs over a finite scope and reports the first counterexample
//! in enumeration order. A verdict that holds only says the axiom held on
//! that scope.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chain_edit::{min_chain_set, EditConfig};
use crate::error::{Error, Result};
use crate::interleave::is_chain_definable;
use crate::operators::Operator;
use crate::preorder::{RankingPair, TotalPreorder};
use crate::tournament::Tournament;

/// Largest cell count enumerated exhaustively.
pub const EXHAUSTIVE_MAX_CELLS: usize = 16;
/// IIM partners are enumerated exhaustively up to this many free cells, sampled beyond.
const IIM_EXHAUSTIVE_FREE_CELLS: usize = 12;
const IIM_SAMPLED_PARTNERS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Anon,
    Dual,
    Iim,
    Mon,
    PosResp,
    ChainMin,
    ChainDef,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::Anon,
        Axiom::Dual,
        Axiom::Iim,
        Axiom::Mon,
        Axiom::PosResp,
        Axiom::ChainMin,
        Axiom::ChainDef,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Anon => "anon",
            Axiom::Dual => "dual",
            Axiom::Iim => "iim",
            Axiom::Mon => "mon",
            Axiom::PosResp => "pos-resp",
            Axiom::ChainMin => "chain-min",
            Axiom::ChainDef => "chain-def",
        }
    }

    pub fn parse(s: &str) -> Result<Axiom> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown axiom '{s}'")))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tournaments an axiom is checked on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Every tournament of each listed shape.
    Exhaustive(Vec<(usize, usize)>),
    /// `samples` uniform tournaments, cycling through the listed shapes.
    Random {
        sizes: Vec<(usize, usize)>,
        samples: usize,
        seed: u64,
    },
    Instances(Vec<Tournament>),
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("size '{s}' must look like 3x4"));
    let (m, n) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if m == 0 || n == 0 {
        return Err(bad());
    }
    Ok((m, n))
}

impl Scope {
    /// `2x2,2x3` for exhaustive shapes, `random:3x3,3x4:200:7` for samples and seed.
    pub fn parse(spec: &str) -> Result<Scope> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("random:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidInput(
                    "random scope must look like random:<sizes>:<samples>:<seed>".into(),
                ));
            }
            let sizes = parts[0]
                .split(',')
                .map(parse_size)
                .collect::<Result<Vec<_>>>()?;
            let samples = parts[1]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad sample count '{}'", parts[1])))?;
            let seed = parts[2]
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad seed '{}'", parts[2])))?;
            return Ok(Scope::Random {
                sizes,
                samples,
                seed,
            });
        }
        Ok(Scope::Exhaustive(
            spec.split(',')
                .map(parse_size)
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    pub fn describe(&self) -> String {
        let sizes = |v: &[(usize, usize)]| v.iter().map(|(m, n)| format!("{m}x{n}")).join(",");
        match self {
            Scope::Exhaustive(v) => format!("exhaustive {}", sizes(v)),
            Scope::Random {
                sizes: v,
                samples,
                seed,
            } => {
                format!("random {} samples of {} (seed {seed})", samples, sizes(v))
            }
            Scope::Instances(v) if v.len() == 1 => format!("instance {:?}", v[0]),
            Scope::Instances(v) => format!("{} instances", v.len()),
        }
    }

    /// The tournaments in checking order.
    pub fn tournaments(&self) -> Result<Vec<Tournament>> {
        match self {
            Scope::Exhaustive(sizes) => {
                let mut out = Vec::new();
                for &(m, n) in sizes {
                    if m * n > EXHAUSTIVE_MAX_CELLS {
                        return Err(Error::ResourceCap {
                            what: "cells in an exhaustive axiom scope",
                            requested: m * n,
                            limit: EXHAUSTIVE_MAX_CELLS,
                            hint: "use a random scope",
                        });
                    }
                    out.extend(Tournament::enumerate(m, n)?);
                }
                Ok(out)
            }
            Scope::Random {
                sizes,
                samples,
                seed,
            } => {
                if sizes.is_empty() {
                    return Err(Error::InvalidInput(
                        "random scope needs at least one size".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*samples)
                    .map(|i| {
                        let (m, n) = sizes[i % sizes.len()];
                        Tournament::from_fn(m, n, |_, _| rng.gen::<bool>())
                    })
                    .collect()
            }
            Scope::Instances(v) => Ok(v.clone()),
        }
    }
}

/// A counterexample, with 0-based players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `a ⪯ a2` in `k` disagrees with `σ(a) ⪯ σ(a2)` in the permuted tournament.
    Anon {
        k: Tournament,
        sigma: Vec<usize>,
        pi: Vec<usize>,
        a: usize,
        a2: usize,
    },
    /// `b ⊑ b2` in `k` disagrees with `b ⪯ b2` in the dual.
    Dual { k: Tournament, b: usize, b2: usize },
    /// `k1`, `k2` share rows `a`, `a2` but order them differently.
    Iim {
        k1: Tournament,
        k2: Tournament,
        a: usize,
        a2: usize,
    },
    /// `K(a) ⊆ K(a2)` yet `a2 ≺ a`.
    Mon { k: Tournament, a: usize, a2: usize },
    /// `a ⪯ a2` and `K[a2][b] = 0`, yet `a ≺ a2` fails after `a2` wins against `b`.
    PosResp {
        k: Tournament,
        a: usize,
        a2: usize,
        b: usize,
    },
    /// Rankings match no closest chain tournament.
    ChainMin {
        k: Tournament,
        rankings: RankingPair,
    },
    /// Rank counts differ by more than one.
    ChainDef {
        k: Tournament,
        rankings: RankingPair,
    },
}

fn rows_json(k: &Tournament) -> Value {
    json!(k.to_rows())
}

fn perm_json(p: &[usize]) -> Value {
    json!(p.iter().map(|x| x + 1).collect::<Vec<_>>())
}

/// Ranks weakest first, 1-based.
pub fn preorder_json(p: &TotalPreorder) -> Value {
    json!(p
        .ranks()
        .iter()
        .map(|r| r.iter().map(|x| x + 1).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

impl Witness {
    pub fn axiom(&self) -> Axiom {
        match self {
            Witness::Anon { .. } => Axiom::Anon,
            Witness::Dual { .. } => Axiom::Dual,
            Witness::Iim { .. } => Axiom::Iim,
            Witness::Mon { .. } => Axiom::Mon,
            Witness::PosResp { .. } => Axiom::PosResp,
            Witness::ChainMin { .. } => Axiom::ChainMin,
            Witness::ChainDef { .. } => Axiom::ChainDef,
        }
    }

    /// Re-evaluates the counterexample; `true` if it still violates the axiom.
    pub fn recheck(&self, op: &dyn Operator, config: &EditConfig) -> Result<bool> {
        match self {
            Witness::Anon {
                k,
                sigma,
                pi,
                a,
                a2,
            } => {
                let p = op.rank(k)?.a;
                let q = op.rank(&k.permute(sigma, pi)?)?.a;
                Ok(p.le(*a, *a2) != q.le(sigma[*a], sigma[*a2]))
            }
            Witness::Dual { k, b, b2 } => {
                Ok(op.rank(k)?.b.le(*b, *b2) != op.rank(&k.dual())?.a.le(*b, *b2))
            }
            Witness::Iim { k1, k2, a, a2 } => iim_instance(op, k1, k2, *a, *a2),
            Witness::Mon { k, a, a2 } => Ok(k.row_subset(*a, *a2) && op.rank(k)?.a.lt(*a2, *a)),
            Witness::PosResp { k, a, a2, b } => pos_resp_instance(op, k, *a, *a2, *b),
            Witness::ChainMin { k, .. } => Ok(!chain_min_holds(op, k, config)?),
            Witness::ChainDef { k, .. } => Ok(!is_chain_definable(&op.rank(k)?)),
        }
    }

    /// 1-based JSON description.
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Anon {
                k,
                sigma,
                pi,
                a,
                a2,
            } => json!({
                "tournament": rows_json(k),
                "sigma": perm_json(sigma),
                "pi": perm_json(pi),
                "players": [a + 1, a2 + 1],
            }),
            Witness::Dual { k, b, b2 } => json!({
                "tournament": rows_json(k),
                "columns": [b + 1, b2 + 1],
            }),
            Witness::Iim { k1, k2, a, a2 } => json!({
                "tournament": rows_json(k1),
                "partner": rows_json(k2),
                "players": [a + 1, a2 + 1],
            }),
            Witness::Mon { k, a, a2 } => json!({
                "tournament": rows_json(k),
                "players": [a + 1, a2 + 1],
            }),
            Witness::PosResp { k, a, a2, b } => json!({
                "tournament": rows_json(k),
                "players": [a + 1, a2 + 1],
                "column": b + 1,
            }),
            Witness::ChainMin { k, rankings } | Witness::ChainDef { k, rankings } => json!({
                "tournament": rows_json(k),
                "a": preorder_json(&rankings.a),
                "b": preorder_json(&rankings.b),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub operator: String,
    pub scope: String,
    /// Tournaments examined (all of them when the axiom holds).
    pub instances: usize,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "axiom": self.axiom.name(),
            "operator": self.operator,
            "scope": self.scope,
            "instances": self.instances,
            "holds": self.holds,
            "witness": self.witness.as_ref().map(Witness::to_json),
        })
    }
}

fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).permutations(n)
}

fn anon_case(
    op: &dyn Operator,
    k: &Tournament,
    base: &TotalPreorder,
    sigma: &[usize],
    pi: &[usize],
) -> Result<Option<Witness>> {
    let q = op.rank(&k.permute(sigma, pi)?)?.a;
    for a in 0..k.rows() {
        for a2 in 0..k.rows() {
            if base.le(a, a2) != q.le(sigma[a], sigma[a2]) {
                return Ok(Some(Witness::Anon {
                    k: k.clone(),
                    sigma: sigma.to_vec(),
                    pi: pi.to_vec(),
                    a,
                    a2,
                }));
            }
        }
    }
    Ok(None)
}

fn anon_violation(op: &dyn Operator, k: &Tournament) -> Result<Option<Witness>> {
    let base = op.rank(k)?.a;
    for sigma in permutations(k.rows()) {
        for pi in permutations(k.cols()) {
            if let Some(w) = anon_case(op, k, &base, &sigma, &pi)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn dual_violation(op: &dyn Operator, k: &Tournament) -> Result<Option<Witness>> {
    let b_rank = op.rank(k)?.b;
    let dual_rank = op.rank(&k.dual())?.a;
    for b in 0..k.cols() {
        for b2 in 0..k.cols() {
            if b_rank.le(b, b2) != dual_rank.le(b, b2) {
                return Ok(Some(Witness::Dual {
                    k: k.clone(),
                    b,
                    b2,
                }));
            }
        }
    }
    Ok(None)
}

/// Orders of `a`, `a2` in both tournaments disagree. Rows must match.
fn iim_instance(
    op: &dyn Operator,
    k1: &Tournament,
    k2: &Tournament,
    a: usize,
    a2: usize,
) -> Result<bool> {
    k1.check_same_shape(k2)?;
    for row in [a, a2] {
        if row >= k1.rows() {
            return Err(Error::OutOfRange {
                what: "row",
                index: row,
                size: k1.rows(),
            });
        }
        if (0..k1.cols()).any(|b| k1.get(row, b) != k2.get(row, b)) {
            return Err(Error::InvalidInput(format!(
                "tournaments differ in row {}",
                row + 1
            )));
        }
    }
    let p = op.rank(k1)?.a;
    let q = op.rank(k2)?.a;
    Ok(p.le(a, a2) != q.le(a, a2) || p.le(a2, a) != q.le(a2, a))
}

/// Tournaments agreeing with `k` on rows `a`, `a2`.
fn iim_partners(k: &Tournament, a: usize, a2: usize, rng: &mut ChaCha8Rng) -> Vec<Tournament> {
    let free: Vec<(usize, usize)> = (0..k.rows())
        .filter(|&r| r != a && r != a2)
        .flat_map(|r| (0..k.cols()).map(move |b| (r, b)))
        .collect();
    let fill = |bits: &dyn Fn(usize) -> bool| {
        let mut t = k.clone();
        for (i, &(r, b)) in free.iter().enumerate() {
            t.set(r, b, bits(i));
        }
        t
    };
    if free.len() <= IIM_EXHAUSTIVE_FREE_CELLS {
        (0u64..1 << free.len())
            .map(|mask| fill(&|i| mask >> i & 1 == 1))
            .collect()
    } else {
        (0..IIM_SAMPLED_PARTNERS)
            .map(|_| {
                let bits: Vec<bool> = (0..free.len()).map(|_| rng.gen()).collect();
                fill(&|i| bits[i])
            })
            .collect()
    }
}

fn iim_violation(op: &dyn Operator, k: &Tournament, seed: u64) -> Result<Option<Witness>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (a, a2) in (0..k.rows()).tuple_combinations() {
        for k2 in iim_partners(k, a, a2, &mut rng) {
            if iim_instance(op, k, &k2, a, a2)? {
                return Ok(Some(Witness::Iim {
                    k1: k.clone(),
                    k2,
                    a,
                    a2,
                }));
            }
        }
    }
    Ok(None)
}

fn mon_violation(op: &dyn Operator, k: &Tournament) -> Result<Option<Witness>> {
    let p = op.rank(k)?.a;
    for a in 0..k.rows() {
        for a2 in 0..k.rows() {
            if k.row_subset(a, a2) && p.lt(a2, a) {
                return Ok(Some(Witness::Mon {
                    k: k.clone(),
                    a,
                    a2,
                }));
            }
        }
    }
    Ok(None)
}

/// `a ⪯ a2`, `K[a2][b] = 0`, and `a ≺ a2` fails after adding that win.
/// Instances not meeting the premise are not violations.
fn pos_resp_instance(
    op: &dyn Operator,
    k: &Tournament,
    a: usize,
    a2: usize,
    b: usize,
) -> Result<bool> {
    if a >= k.rows() || a2 >= k.rows() || b >= k.cols() {
        return Err(Error::InvalidInput("player out of range".into()));
    }
    if a == a2 || k.get(a2, b) || !op.rank(k)?.a.le(a, a2) {
        return Ok(false);
    }
    Ok(!op.rank(&k.with_cell(a2, b, true))?.a.lt(a, a2))
}

fn pos_resp_violation(op: &dyn Operator, k: &Tournament) -> Result<Option<Witness>> {
    let p = op.rank(k)?.a;
    for a2 in 0..k.rows() {
        for b in (0..k.cols()).filter(|&b| !k.get(a2, b)) {
            let raised = op.rank(&k.with_cell(a2, b, true))?.a;
            for a in (0..k.rows()).filter(|&a| a != a2) {
                if p.le(a, a2) && !raised.lt(a, a2) {
                    return Ok(Some(Witness::PosResp {
                        k: k.clone(),
                        a,
                        a2,
                        b,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The rankings equal those of some closest chain tournament.
pub fn chain_min_holds(op: &dyn Operator, k: &Tournament, config: &EditConfig) -> Result<bool> {
    let p = op.rank(k)?;
    for member in min_chain_set(k, config)?.members {
        if member.chain_rankings()? == p {
            return Ok(true);
        }
    }
    Ok(false)
}

fn violation(
    axiom: Axiom,
    op: &dyn Operator,
    k: &Tournament,
    config: &EditConfig,
    seed: u64,
) -> Result<Option<Witness>> {
    match axiom {
        Axiom::Anon => anon_violation(op, k),
        Axiom::Dual => dual_violation(op, k),
        Axiom::Iim => iim_violation(op, k, seed),
        Axiom::Mon => mon_violation(op, k),
        Axiom::PosResp => pos_resp_violation(op, k),
        Axiom::ChainMin => {
            if chain_min_holds(op, k, config)? {
                Ok(None)
            } else {
                Ok(Some(Witness::ChainMin {
                    k: k.clone(),
                    rankings: op.rank(k)?,
                }))
            }
        }
        Axiom::ChainDef => {
            let p = op.rank(k)?;
            if is_chain_definable(&p) {
                Ok(None)
            } else {
                Ok(Some(Witness::ChainDef {
                    k: k.clone(),
                    rankings: p,
                }))
            }
        }
    }
}

/// Checks one axiom over a scope; the first counterexample in scope order is reported.
pub fn check(
    axiom: Axiom,
    op: &dyn Operator,
    scope: &Scope,
    config: &EditConfig,
) -> Result<AxiomVerdict> {
    let tournaments = scope.tournaments()?;
    let seed = match scope {
        Scope::Random { seed, .. } => *seed,
        _ => 0,
    };
    let found = tournaments
        .par_iter()
        .enumerate()
        .map(|(i, k)| violation(axiom, op, k, config, seed.wrapping_add(i as u64)))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();
    Ok(AxiomVerdict {
        axiom,
        operator: op.name(),
        scope: scope.describe(),
        instances: match &found {
            Some(w) => {
                1 + tournaments
                    .iter()
                    .position(|t| witness_tournament(w) == t)
                    .unwrap_or(0)
            }
            None => tournaments.len(),
        },
        holds: found.is_none(),
        witness: found,
    })
}

fn witness_tournament(w: &Witness) -> &Tournament {
    match w {
        Witness::Anon { k, .. }
        | Witness::Dual { k, .. }
        | Witness::Mon { k, .. }
        | Witness::PosResp { k, .. }
        | Witness::ChainMin { k, .. }
        | Witness::ChainDef { k, .. } => k,
        Witness::Iim { k1, .. } => k1,
    }
}

pub fn check_anon(op: &dyn Operator, scope: &Scope) -> Result<AxiomVerdict> {
    check(Axiom::Anon, op, scope, &EditConfig::default())
}

pub fn check_dual(op: &dyn Operator, scope: &Scope) -> Result<AxiomVerdict> {
    check(Axiom::Dual, op, scope, &EditConfig::default())
}

pub fn check_iim(op: &dyn Operator, scope: &Scope) -> Result<AxiomVerdict> {
    check(Axiom::Iim, op, scope, &EditConfig::default())
}

pub fn check_mon(op: &dyn Operator, scope: &Scope) -> Result<AxiomVerdict> {
    check(Axiom::Mon, op, scope, &EditConfig::default())
}

pub fn check_pos_resp(op: &dyn Operator, scope: &Scope) -> Result<AxiomVerdict> {
    check(Axiom::PosResp, op, scope, &EditConfig::default())
}

pub fn check_chain_min(
    op: &dyn Operator,
    k: &Tournament,
    config: &EditConfig,
) -> Result<AxiomVerdict> {
    check(
        Axiom::ChainMin,
        op,
        &Scope::Instances(vec![k.clone()]),
        config,
    )
}

pub fn check_chain_def(op: &dyn Operator, k: &Tournament) -> Result<AxiomVerdict> {
    check(
        Axiom::ChainDef,
        op,
        &Scope::Instances(vec![k.clone()]),
        &EditConfig::default(),
    )
}

fn single(
    axiom: Axiom,
    op: &dyn Operator,
    scope: String,
    witness: Option<Witness>,
) -> AxiomVerdict {
    AxiomVerdict {
        axiom,
        operator: op.name(),
        scope,
        instances: 1,
        holds: witness.is_none(),
        witness,
    }
}

fn fmt_perm(p: &[usize]) -> String {
    p.iter().map(|x| (x + 1).to_string()).join(" ")
}

/// Anonymity under one fixed pair of permutations.
pub fn check_anon_instance(
    op: &dyn Operator,
    k: &Tournament,
    sigma: &[usize],
    pi: &[usize],
) -> Result<AxiomVerdict> {
    let base = op.rank(k)?.a;
    let w = anon_case(op, k, &base, sigma, pi)?;
    let scope = format!(
        "instance {k:?} with sigma [{}], pi [{}]",
        fmt_perm(sigma),
        fmt_perm(pi)
    );
    Ok(single(Axiom::Anon, op, scope, w))
}

pub fn check_iim_instance(
    op: &dyn Operator,
    k1: &Tournament,
    k2: &Tournament,
    a: usize,
    a2: usize,
) -> Result<AxiomVerdict> {
    let fails = iim_instance(op, k1, k2, a, a2)?;
    let scope = format!(
        "instance pair {k1:?}, {k2:?} on rows {} and {}",
        a + 1,
        a2 + 1
    );
    let w = fails.then(|| Witness::Iim {
        k1: k1.clone(),
        k2: k2.clone(),
        a,
        a2,
    });
    Ok(single(Axiom::Iim, op, scope, w))
}

pub fn check_pos_resp_instance(
    op: &dyn Operator,
    k: &Tournament,
    a: usize,
    a2: usize,
    b: usize,
) -> Result<AxiomVerdict> {
    let fails = pos_resp_instance(op, k, a, a2, b)?;
    let scope = format!(
        "instance {k:?} at players {} and {}, column {}",
        a + 1,
        a2 + 1,
        b + 1
    );
    let w = fails.then(|| Witness::PosResp {
        k: k.clone(),
        a,
        a2,
        b,
    });
    Ok(single(Axiom::PosResp, op, scope, w))
}

/// One replayed verdict and whether it came out as predicted.
#[derive(Clone, Debug)]
pub struct SuiteCase {
    pub label: String,
    pub verdict: AxiomVerdict,
    /// Predicted `holds`, when there is a prediction for this operator.
    pub expected: Option<bool>,
    /// The witness, if any, reproduced on a fresh evaluation.
    pub witness_rechecked: bool,
}

impl SuiteCase {
    pub fn as_predicted(&self) -> bool {
        self.witness_rechecked && self.expected.is_none_or(|e| e == self.verdict.holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.label,
            "expected_holds": self.expected,
            "as_predicted": self.as_predicted(),
            "verdict": self.verdict.to_json(),
        })
    }
}

/// The four-by-two argument that no operator ranks both sides anonymously,
/// dually, positively responsively and through some chain tournament.
#[derive(Clone, Debug)]
pub struct ForcedRankings {
    pub k: Tournament,
    pub dual: Tournament,
    /// Swapping the rows of the dual, with a matching column permutation, gives the dual back.
    pub dual_is_row_symmetric: bool,
    pub forced: RankingPair,
    pub forced_chain_definable: bool,
}

impl ForcedRankings {
    pub fn contradiction(&self) -> bool {
        self.dual_is_row_symmetric && !self.forced_chain_definable
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tournament": rows_json(&self.k),
            "dual": rows_json(&self.dual),
            "dual_is_row_symmetric": self.dual_is_row_symmetric,
            "forced_a": preorder_json(&self.forced.a),
            "forced_b": preorder_json(&self.forced.b),
            "a_ranks": self.forced.a.rank_count(),
            "b_ranks": self.forced.b.rank_count(),
            "chain_definable": self.forced_chain_definable,
            "contradiction": self.contradiction(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub operator: String,
    pub cases: Vec<SuiteCase>,
    pub forced: ForcedRankings,
}

impl SuiteReport {
    pub fn all_as_predicted(&self) -> bool {
        self.forced.contradiction() && self.cases.iter().all(SuiteCase::as_predicted)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "operator": self.operator,
            "as_predicted": self.all_as_predicted(),
            "cases": self.cases.iter().map(SuiteCase::to_json).collect::<Vec<_>>(),
            "forced_rankings": self.forced.to_json(),
        })
    }
}

fn t(rows: &[&[u8]]) -> Tournament {
    Tournament::from_rows(rows).expect("fixed instance")
}

/// Two rows beating nobody, one beating the first column, one beating both.
pub fn four_by_two() -> Tournament {
    t(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])
}

pub fn forced_rankings() -> ForcedRankings {
    let k = four_by_two();
    let dual = k.dual();
    let dual_is_row_symmetric =
        permutations(dual.cols()).any(|pi| dual.permute(&[1, 0], &pi).is_ok_and(|p| p == dual));
    let forced = RankingPair::new(
        TotalPreorder::new(4, vec![vec![0], vec![1, 2], vec![3]]).expect("fixed ranking"),
        TotalPreorder::flat(2),
    );
    ForcedRankings {
        k,
        dual,
        dual_is_row_symmetric,
        forced_chain_definable: is_chain_definable(&forced),
        forced,
    }
}

fn case(
    label: &str,
    verdict: AxiomVerdict,
    expected: Option<bool>,
    op: &dyn Operator,
    config: &EditConfig,
) -> Result<SuiteCase> {
    let witness_rechecked = match &verdict.witness {
        Some(w) => w.recheck(op, config)?,
        None => true,
    };
    Ok(SuiteCase {
        label: label.into(),
        verdict,
        expected,
        witness_rechecked,
    })
}

/// Replays the fixed counterexamples against `op`.
///
/// Operators exposing a choice function rank through a closest chain
/// tournament, so they are predicted to fail anonymity on the 2×2 diagonal,
/// IIM on the 3×3 pair and positive responsiveness on the 4×3 instance. The
/// `ci` operator is predicted to satisfy chain-def, anon, dual and mon on all
/// 2×2 and 2×3 tournaments and to fail IIM and positive responsiveness.
pub fn impossibility_suite(op: &dyn Operator, config: &EditConfig) -> Result<SuiteReport> {
    let chain_min = op.has_choice();
    let is_ci = op.name() == "ci";
    let predict = |fails: bool| {
        if chain_min || is_ci {
            Some(!fails)
        } else {
            None
        }
    };
    let mut cases = Vec::new();

    let diag = t(&[&[1, 0], &[0, 1]]);
    let v = check_anon_instance(op, &diag, &[1, 0], &[1, 0])?;
    cases.push(case(
        "anon on the 2x2 diagonal, rows and columns swapped",
        v,
        predict(chain_min),
        op,
        config,
    )?);

    let k1 = t(&[&[1, 0, 0], &[0, 1, 0], &[0, 1, 1]]);
    let k2 = t(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]);
    let v = check_iim_instance(op, &k1, &k2, 0, 1)?;
    cases.push(case(
        "iim on the 3x3 pair sharing rows 1 and 2",
        v,
        predict(true),
        op,
        config,
    )?);

    let k43 = t(&[&[1, 1, 1], &[1, 1, 0], &[0, 0, 1], &[0, 0, 1]]);
    let v = check_pos_resp_instance(op, &k43, 0, 1, 2)?;
    cases.push(case(
        "pos-resp on the 4x3 instance, row 2 wins against column 3",
        v,
        predict(chain_min),
        op,
        config,
    )?);

    if chain_min {
        for (label, k) in [
            ("chain-min on the 2x2 diagonal", &diag),
            ("chain-min on the 4x3 instance", &k43),
        ] {
            let v = check_chain_min(op, k, config)?;
            cases.push(case(label, v, Some(true), op, config)?);
        }
    }

    if is_ci {
        let small = Scope::Exhaustive(vec![(2, 2), (2, 3)]);
        for axiom in [Axiom::ChainDef, Axiom::Anon, Axiom::Dual, Axiom::Mon] {
            let v = check(axiom, op, &small, config)?;
            cases.push(case(
                &format!("{axiom} on every 2x2 and 2x3 tournament"),
                v,
                Some(true),
                op,
                config,
            )?);
        }
        let k42 = t(&[&[0, 0], &[0, 0], &[1, 0], &[1, 1]]);
        let v = check_pos_resp_instance(op, &k42, 0, 1, 1)?;
        cases.push(case(
            "pos-resp on the 4x2 instance, row 2 wins against column 2",
            v,
            Some(false),
            op,
            config,
        )?);
        let search = Scope::Exhaustive(vec![(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)]);
        let v = check(Axiom::PosResp, op, &search, config)?;
        cases.push(case(
            "pos-resp search up to 4x3",
            v,
            Some(false),
            op,
            config,
        )?);
    }

    if op.name() == "count" {
        let v = check_chain_def(op, &four_by_two())?;
        cases.push(case(
            "chain-def on the 4x2 instance",
            v,
            Some(false),
            op,
            config,
        )?);
    }

    Ok(SuiteReport {
        operator: op.name(),
        cases,
        forced: forced_rankings(),
    })
}
