//! Exact chain editing.
//!
//! Every chain tournament has nested row neighbourhoods, and every chain of
//! nested subsets of the columns extends to a maximal one, i.e. to the prefixes
//! of some column permutation. The solvers therefore enumerate permutations of
//! the smaller side (dualising first when there are more columns than rows)
//! and let each row pick its cheapest prefix independently. Results found on
//! the dual are mapped back through `dual`, which is a bijection between the
//! closest chain tournaments of `K` and of `K*`.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Default limit on the size of the smaller side for permutation search.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

const BRUTE_FORCE_MAX_CELLS: usize = 16;

/// Limits for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EditConfig {
    /// Largest allowed `min(m, n)`.
    pub cap: usize,
}

impl Default for EditConfig {
    fn default() -> Self {
        EditConfig {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl EditConfig {
    pub fn with_cap(cap: usize) -> Self {
        EditConfig { cap }
    }

    fn check(&self, k: &Tournament) -> Result<()> {
        let side = k.rows().min(k.cols());
        if side > self.cap {
            return Err(Error::ResourceCap {
                what: "smaller side of the tournament",
                requested: side,
                limit: self.cap,
                hint: "use an interleaving operator or raise the enumeration cap",
            });
        }
        Ok(())
    }
}

/// The closest chain tournaments to some tournament, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinChainSet {
    pub distance: usize,
    pub members: Vec<Tournament>,
}

impl MinChainSet {
    pub fn contains(&self, k: &Tournament) -> bool {
        self.members.binary_search(k).is_ok()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Only the optimum value; permutations are abandoned once they exceed it.
    Distance,
    /// Every optimal tournament.
    Collect,
}

/// Flip costs laid out for the oriented (possibly dualised) problem.
struct Oriented {
    k: Tournament,
    transposed: bool,
    /// `None` forbids flipping that cell.
    costs: Vec<Option<u128>>,
}

impl Oriented {
    fn new<F>(k: &Tournament, cost: F) -> Oriented
    where
        F: Fn(usize, usize, bool) -> Option<u128>,
    {
        let transposed = k.cols() > k.rows();
        let ok = if transposed { k.dual() } else { k.clone() };
        let (m, n) = ok.shape();
        let mut costs = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                costs.push(if transposed {
                    cost(j, i, k.get(j, i))
                } else {
                    cost(i, j, k.get(i, j))
                });
            }
        }
        Oriented {
            k: ok,
            transposed,
            costs,
        }
    }

    fn restore(&self, t: Tournament) -> Tournament {
        if self.transposed {
            t.dual()
        } else {
            t
        }
    }
}

struct Outcome {
    best: Option<u128>,
    found: BTreeSet<Tournament>,
}

impl Outcome {
    fn empty() -> Self {
        Outcome {
            best: None,
            found: BTreeSet::new(),
        }
    }

    fn merge(mut self, other: Outcome) -> Outcome {
        match (self.best, other.best) {
            (_, None) => self,
            (None, Some(_)) => other,
            (Some(x), Some(y)) if y < x => other,
            (Some(x), Some(y)) if y > x => self,
            _ => {
                self.found.extend(other.found);
                self
            }
        }
    }
}

/// Per-row optimal prefix lengths and their cost, for one permutation.
fn row_optimum(o: &Oriented, row: usize, perm: &[usize]) -> Option<(u128, Vec<usize>)> {
    let n = o.k.cols();
    let costs = &o.costs[row * n..(row + 1) * n];
    // Empty prefix: every 1 in the row must be flipped.
    let mut forbidden = 0usize;
    let mut sum: u128 = 0;
    for (b, c) in costs.iter().enumerate() {
        if o.k.get(row, b) {
            match c {
                Some(c) => sum += c,
                None => forbidden += 1,
            }
        }
    }
    let mut best: Option<u128> = None;
    let mut lens = Vec::new();
    let mut consider = |len: usize, forbidden: usize, sum: u128| {
        if forbidden > 0 {
            return;
        }
        match best {
            Some(b) if sum > b => {}
            Some(b) if sum == b => lens.push(len),
            _ => {
                best = Some(sum);
                lens.clear();
                lens.push(len);
            }
        }
    };
    consider(0, forbidden, sum);
    for (i, &b) in perm.iter().enumerate() {
        let c = costs[b];
        if o.k.get(row, b) {
            match c {
                Some(c) => sum -= c,
                None => forbidden -= 1,
            }
        } else {
            match c {
                Some(c) => sum += c,
                None => forbidden += 1,
            }
        }
        consider(i + 1, forbidden, sum);
    }
    best.map(|b| (b, lens))
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn expand(o: &Oriented, perm: &[usize], choices: &[Vec<usize>], out: &mut BTreeSet<Tournament>) {
    let (m, n) = o.k.shape();
    let mut idx = vec![0usize; m];
    loop {
        let mut t = Tournament::zeros(m, n).expect("non-empty shape");
        for (row, choice) in choices.iter().enumerate() {
            for &b in &perm[..choice[idx[row]]] {
                t.set(row, b, true);
            }
        }
        out.insert(t);
        let mut r = 0;
        loop {
            if r == m {
                return;
            }
            idx[r] += 1;
            if idx[r] < choices[r].len() {
                break;
            }
            idx[r] = 0;
            r += 1;
        }
    }
}

fn search_from(o: &Oriented, first: usize, mode: Mode) -> Outcome {
    let (m, n) = o.k.shape();
    let mut perm: Vec<usize> = std::iter::once(first)
        .chain((0..n).filter(|&b| b != first))
        .collect();
    let mut out = Outcome::empty();
    loop {
        let mut total: u128 = 0;
        let mut choices = Vec::with_capacity(m);
        let mut feasible = true;
        for row in 0..m {
            match row_optimum(o, row, &perm) {
                Some((c, lens)) => {
                    total += c;
                    choices.push(lens);
                }
                None => {
                    feasible = false;
                    break;
                }
            }
            if mode == Mode::Distance && matches!(out.best, Some(b) if total > b) {
                feasible = false;
                break;
            }
        }
        if feasible {
            let better = out.best.is_none_or(|b| total < b);
            if better {
                out.best = Some(total);
                out.found.clear();
            }
            if mode == Mode::Collect && (better || out.best == Some(total)) {
                expand(o, &perm, &choices, &mut out.found);
            }
        }
        if !next_permutation(&mut perm[1..]) {
            break;
        }
    }
    out
}

fn search<F>(
    k: &Tournament,
    config: &EditConfig,
    mode: Mode,
    cost: F,
) -> Result<(Option<u128>, Vec<Tournament>)>
where
    F: Fn(usize, usize, bool) -> Option<u128>,
{
    config.check(k)?;
    let o = Oriented::new(k, cost);
    let outcome = (0..o.k.cols())
        .into_par_iter()
        .map(|first| search_from(&o, first, mode))
        .reduce(Outcome::empty, Outcome::merge);
    let members: BTreeSet<Tournament> = outcome.found.into_iter().map(|t| o.restore(t)).collect();
    Ok((outcome.best, members.into_iter().collect()))
}

fn unit_cost(_: usize, _: usize, _: bool) -> Option<u128> {
    Some(1)
}

fn into_set(k: &Tournament, best: Option<u128>, members: Vec<Tournament>) -> Result<MinChainSet> {
    let distance =
        best.ok_or_else(|| Error::Internal("no feasible chain tournament".into()))? as usize;
    debug_assert!(members
        .iter()
        .all(|t| t.has_chain_property() && t.hamming(k) == Ok(distance)));
    Ok(MinChainSet { distance, members })
}

/// All chain tournaments at minimum Hamming distance from `k`.
pub fn min_chain_set(k: &Tournament, config: &EditConfig) -> Result<MinChainSet> {
    let (best, members) = search(k, config, Mode::Collect, unit_cost)?;
    into_set(k, best, members)
}

/// The minimum Hamming distance from `k` to a chain tournament.
pub fn min_chain_distance(k: &Tournament, config: &EditConfig) -> Result<usize> {
    let (best, _) = search(k, config, Mode::Distance, unit_cost)?;
    best.map(|b| b as usize)
        .ok_or_else(|| Error::Internal("no feasible chain tournament".into()))
}

/// Closest chain tournaments reachable by adding wins only.
pub fn chain_completion(k: &Tournament, config: &EditConfig) -> Result<MinChainSet> {
    let (best, members) = search(k, config, Mode::Collect, |_, _, cur| (!cur).then_some(1))?;
    into_set(k, best, members)
}

/// Closest chain tournaments reachable by removing wins only.
pub fn chain_deletion(k: &Tournament, config: &EditConfig) -> Result<MinChainSet> {
    let (best, members) = search(k, config, Mode::Collect, |_, _, cur| cur.then_some(1))?;
    into_set(k, best, members)
}

/// Minimum-weight chain repair under per-cell positive integer weights.
///
/// `weights` is row-major with one entry per cell. Fails with
/// [`Error::Ambiguous`] if more than one chain tournament attains the minimum.
pub fn weighted_min_chain(
    k: &Tournament,
    weights: &[u128],
    config: &EditConfig,
) -> Result<Tournament> {
    let n = k.cols();
    if weights.len() != k.cell_count() {
        return Err(Error::InvalidInput(format!(
            "expected {} weights, got {}",
            k.cell_count(),
            weights.len()
        )));
    }
    if weights.contains(&0) {
        return Err(Error::InvalidInput(
            "weights must be strictly positive".into(),
        ));
    }
    let (_, mut members) = search(k, config, Mode::Collect, |a, b, _| Some(weights[a * n + b]))?;
    match members.len() {
        1 => Ok(members.pop().expect("one member")),
        0 => Err(Error::Internal("no feasible chain tournament".into())),
        count => Err(Error::Ambiguous(count)),
    }
}

/// `Σ w(a,b)·|K_ab − K'_ab|`
pub fn weighted_distance(k: &Tournament, other: &Tournament, weights: &[u128]) -> Result<u128> {
    let diff = k.xor(other)?;
    Ok(diff
        .cells()
        .zip(weights)
        .filter(|(d, _)| *d)
        .map(|(_, w)| *w)
        .sum())
}

/// Oracle: enumerates every tournament of the same shape.
pub fn brute_force_min_chain(k: &Tournament) -> Result<MinChainSet> {
    if k.cell_count() > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::ResourceCap {
            what: "cell count for brute-force chain editing",
            requested: k.cell_count(),
            limit: BRUTE_FORCE_MAX_CELLS,
            hint: "use min_chain_set",
        });
    }
    let mut best = usize::MAX;
    let mut members = Vec::new();
    for t in Tournament::enumerate(k.rows(), k.cols())? {
        if !t.has_chain_property() {
            continue;
        }
        let d = k.hamming(&t)?;
        if d < best {
            best = d;
            members.clear();
        }
        if d == best {
            members.push(t);
        }
    }
    Ok(MinChainSet {
        distance: best,
        members,
    })
}

/// `K(a) ⊆ K(a')` in `k` implies `M(a) ⊆ M(a')` in `m`.
pub fn extends_subset_order(k: &Tournament, m: &Tournament) -> bool {
    let rows = k.rows();
    (0..rows).all(|a| (0..rows).all(|a2| !k.row_subset(a, a2) || m.row_subset(a, a2)))
}

/// The canonically least closest chain tournament whose row order extends
/// the neighbourhood-subset order of `k`.
pub fn monotone_min_chain(k: &Tournament, config: &EditConfig) -> Result<Tournament> {
    let set = min_chain_set(k, config)?;
    set.members
        .into_iter()
        .find(|m| extends_subset_order(k, m))
        .ok_or_else(|| {
            Error::Internal("no closest chain tournament extends the subset order".into())
        })
}

/// Repairs a closest chain tournament `closest` of `k` into one whose row
/// order extends the subset order of `k`.
///
/// First, rows are visited by increasing number of subsets below them; when a
/// row sits above the lowest of its strict supersets it is swapped with it.
/// Then each class of identical rows of `k` takes the repaired neighbourhood
/// of its member nearest to the shared original row.
pub fn extend_monotone(k: &Tournament, closest: &Tournament) -> Result<Tournament> {
    k.check_same_shape(closest)?;
    if !closest.has_chain_property() {
        let (a1, a2) = closest.chain_violation().expect("violation");
        return Err(Error::NotChain(a1, a2));
    }
    let m = k.rows();
    let strictly_below = |a: usize, a2: usize| k.row_subset(a, a2) && !k.rows_equal(a, a2);

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&a| (0..m).filter(|&x| k.row_subset(x, a)).count());
    let mut cur = closest.clone();
    for &a in &order {
        let lowest = (0..m)
            .filter(|&x| strictly_below(a, x))
            .min_by_key(|&x| (cur.row_len(x), x));
        if let Some(hat) = lowest {
            if !cur.row_subset(a, hat) {
                cur = cur.swap_rows(a, hat)?;
            }
        }
    }

    let mut out = cur.clone();
    for a in 0..m {
        let rep = (0..m)
            .filter(|&x| k.rows_equal(x, a))
            .min_by_key(|&x| (row_distance(k, a, &cur, x), x))
            .expect("class contains a");
        for b in 0..k.cols() {
            out.set(a, b, cur.get(rep, b));
        }
    }
    Ok(out)
}

fn row_distance(k: &Tournament, a: usize, other: &Tournament, x: usize) -> usize {
    k.row_words(a)
        .iter()
        .zip(other.row_words(x))
        .map(|(p, q)| (p ^ q).count_ones() as usize)
        .sum()
}

/// Every distinct chain tournament of a shape, in canonical order.
pub fn chain_tournaments(rows: usize, cols: usize, config: &EditConfig) -> Result<Vec<Tournament>> {
    const LIMIT: usize = 20_000_000;
    let probe = Tournament::zeros(rows, cols)?;
    config.check(&probe)?;
    let (long, short) = (rows.max(cols), rows.min(cols));
    let work = (1..=short)
        .try_fold(1usize, |acc, x| acc.checked_mul(x))
        .and_then(|f| (0..long).try_fold(f, |acc, _| acc.checked_mul(short + 1)));
    if work.is_none_or(|w| w > LIMIT) {
        return Err(Error::ResourceCap {
            what: "chain tournament enumeration size",
            requested: work.unwrap_or(usize::MAX),
            limit: LIMIT,
            hint: "restrict likelihood search to smaller tournaments",
        });
    }
    let o = Oriented::new(&probe, unit_cost);
    let (m, n) = o.k.shape();
    let mut found = BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let all_lengths: Vec<Vec<usize>> = vec![(0..=n).collect(); m];
    loop {
        expand(&o, &perm, &all_lengths, &mut found);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let restored: BTreeSet<Tournament> = found.into_iter().map(|t| o.restore(t)).collect();
    Ok(restored.into_iter().collect())
}
