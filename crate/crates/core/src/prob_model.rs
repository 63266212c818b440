//! Threshold model: hidden skill levels decide every match, and each observed
//! result is flipped independently with a rate depending on the true result.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain_edit::{chain_tournaments, EditConfig};
use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Relative tolerance for treating two log-likelihoods as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Skill levels of the row players (`x`) and column players (`y`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateOfWorld {
    x: Vec<i64>,
    y: Vec<i64>,
}

fn explainability_violation<T: PartialOrd>(x: &[T], y: &[T]) -> Option<String> {
    for (a, xa) in x.iter().enumerate() {
        for (a2, xa2) in x.iter().enumerate() {
            if xa < xa2 && !y.iter().any(|yb| xa < yb && yb <= xa2) {
                return Some(format!(
                    "no column player separates row players {} and {}",
                    a + 1,
                    a2 + 1
                ));
            }
        }
    }
    for (b, yb) in y.iter().enumerate() {
        for (b2, yb2) in y.iter().enumerate() {
            if yb < yb2 && !x.iter().any(|xa| yb <= xa && xa < yb2) {
                return Some(format!(
                    "no row player separates column players {} and {}",
                    b + 1,
                    b2 + 1
                ));
            }
        }
    }
    None
}

fn check_sides(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(
            "a state needs at least one player on each side".into(),
        ));
    }
    Ok(())
}

impl StateOfWorld {
    pub fn new(x: Vec<i64>, y: Vec<i64>) -> Result<Self> {
        check_sides(x.len(), y.len())?;
        if let Some(msg) = explainability_violation(&x, &y) {
            return Err(Error::InvalidInput(msg));
        }
        Ok(StateOfWorld { x, y })
    }

    /// Validates a real-valued state, then replaces it by the canonical
    /// integer state of the same tournament.
    pub fn from_real(x: &[f64], y: &[f64]) -> Result<Self> {
        check_sides(x.len(), y.len())?;
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("skill levels must be finite".into()));
        }
        if let Some(msg) = explainability_violation(x, y) {
            return Err(Error::InvalidInput(msg));
        }
        let k = Tournament::from_fn(x.len(), y.len(), |a, b| x[a] >= y[b])?;
        canonical_state(&k)
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn y(&self) -> &[i64] {
        &self.y
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x.len(), self.y.len())
    }
}

/// False-positive rate `alpha_plus` (a loss observed as a win) and
/// false-negative rate `alpha_minus` (a win observed as a loss).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    alpha_plus: f64,
    alpha_minus: f64,
}

impl NoiseParams {
    pub fn new(alpha_plus: f64, alpha_minus: f64) -> Result<Self> {
        for (name, v) in [("alpha_plus", alpha_plus), ("alpha_minus", alpha_minus)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(NoiseParams {
            alpha_plus,
            alpha_minus,
        })
    }

    pub fn symmetric(beta: f64) -> Result<Self> {
        NoiseParams::new(beta, beta)
    }

    pub fn alpha_plus(&self) -> f64 {
        self.alpha_plus
    }

    pub fn alpha_minus(&self) -> f64 {
        self.alpha_minus
    }
}

/// `[K_θ]_ab = 1` iff `x_a ≥ y_b`.
pub fn k_theta(theta: &StateOfWorld) -> Tournament {
    let (m, n) = theta.shape();
    Tournament::from_fn(m, n, |a, b| theta.x[a] >= theta.y[b])
        .expect("validated state is non-empty")
}

/// `x_a` counts rows whose neighbourhood is inside that of `a`; `y_b` is the
/// least `x` among rows beating `b`, or `m + 1` if none does.
pub fn canonical_state(k: &Tournament) -> Result<StateOfWorld> {
    if let Some((a1, a2)) = k.chain_violation() {
        return Err(Error::NotChain(a1, a2));
    }
    let (m, n) = k.shape();
    let x: Vec<i64> = (0..m)
        .map(|a| (0..m).filter(|&a2| k.row_subset(a2, a)).count() as i64)
        .collect();
    let y: Vec<i64> = (0..n)
        .map(|b| {
            (0..m)
                .filter(|&a| k.get(a, b))
                .map(|a| x[a])
                .min()
                .unwrap_or(m as i64 + 1)
        })
        .collect();
    StateOfWorld::new(x, y)
}

/// Cell counts of the observed tournament against the true one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Confusion {
    /// observed 1, true 0
    pub false_pos: u64,
    /// observed 1, true 1
    pub true_pos: u64,
    /// observed 0, true 0
    pub true_neg: u64,
    /// observed 0, true 1
    pub false_neg: u64,
}

pub fn confusion(k: &Tournament, truth: &Tournament) -> Result<Confusion> {
    k.check_same_shape(truth)?;
    let mut c = Confusion::default();
    for (obs, t) in k.cells().zip(truth.cells()) {
        match (obs, t) {
            (true, false) => c.false_pos += 1,
            (true, true) => c.true_pos += 1,
            (false, false) => c.true_neg += 1,
            (false, true) => c.false_neg += 1,
        }
    }
    Ok(c)
}

fn factors(c: &Confusion, alpha: &NoiseParams) -> [(f64, u64); 4] {
    [
        (alpha.alpha_plus, c.false_pos),
        (1.0 - alpha.alpha_minus, c.true_pos),
        (1.0 - alpha.alpha_plus, c.true_neg),
        (alpha.alpha_minus, c.false_neg),
    ]
}

fn check_state_shape(k: &Tournament, theta: &StateOfWorld) -> Result<()> {
    if k.shape() != theta.shape() {
        return Err(Error::DimensionMismatch {
            expected: k.shape(),
            found: theta.shape(),
        });
    }
    Ok(())
}

/// `P(K | θ)` as a product of four powers.
pub fn likelihood(k: &Tournament, theta: &StateOfWorld, alpha: &NoiseParams) -> Result<f64> {
    check_state_shape(k, theta)?;
    let c = confusion(k, &k_theta(theta))?;
    Ok(factors(&c, alpha)
        .iter()
        .map(|&(p, e)| p.powi(e as i32))
        .product())
}

/// Log-likelihood of an observation against a known true tournament;
/// `None` when the probability is zero.
pub fn log_likelihood_against(
    k: &Tournament,
    truth: &Tournament,
    alpha: &NoiseParams,
) -> Result<Option<f64>> {
    let c = confusion(k, truth)?;
    // Equal bases are merged first so that equal Hamming distances give
    // bit-identical sums in the symmetric case.
    let mut merged: Vec<(f64, u64)> = Vec::with_capacity(4);
    for (p, e) in factors(&c, alpha) {
        if e == 0 {
            continue;
        }
        if p == 0.0 {
            return Ok(None);
        }
        match merged.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += e,
            None => merged.push((p, e)),
        }
    }
    merged.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(Some(merged.iter().map(|&(p, e)| e as f64 * p.ln()).sum()))
}

pub fn log_likelihood(
    k: &Tournament,
    theta: &StateOfWorld,
    alpha: &NoiseParams,
) -> Result<Option<f64>> {
    check_state_shape(k, theta)?;
    log_likelihood_against(k, &k_theta(theta), alpha)
}

fn tied(best: f64, v: f64) -> bool {
    best - v <= TIE_TOLERANCE * best.abs().max(v.abs())
}

/// True tournaments of every maximum-likelihood state, in canonical order.
pub fn mle_search(
    k: &Tournament,
    alpha: &NoiseParams,
    config: &EditConfig,
) -> Result<Vec<Tournament>> {
    let candidates = chain_tournaments(k.rows(), k.cols(), config)?;
    let scored: Vec<(Tournament, Option<f64>)> = candidates
        .into_par_iter()
        .map(|c| {
            let truth = k_theta(&canonical_state(&c)?);
            debug_assert_eq!(truth, c);
            let ll = log_likelihood_against(k, &truth, alpha)?;
            Ok((truth, ll))
        })
        .collect::<Result<_>>()?;
    let best = scored
        .iter()
        .filter_map(|(_, v)| *v)
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        })
        .ok_or_else(|| {
            Error::InvalidInput("every state has probability zero under these noise rates".into())
        })?;
    let mut out: Vec<Tournament> = scored
        .into_iter()
        .filter(|(_, v)| v.is_some_and(|v| tied(best, v)))
        .map(|(t, _)| t)
        .collect();
    out.sort();
    Ok(out)
}

/// Generator for trial `trial` of a run seeded with `seed`; streams are
/// independent of each other and of evaluation order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn sample_tournament_with<R: Rng>(
    theta: &StateOfWorld,
    alpha: &NoiseParams,
    rng: &mut R,
) -> Tournament {
    let truth = k_theta(theta);
    let mut out = truth.clone();
    for a in 0..truth.rows() {
        for b in 0..truth.cols() {
            let flip_rate = if truth.get(a, b) {
                alpha.alpha_minus
            } else {
                alpha.alpha_plus
            };
            if rng.gen::<f64>() < flip_rate {
                out.set(a, b, !truth.get(a, b));
            }
        }
    }
    out
}

/// Observed tournament drawn through the noise channel.
pub fn sample_tournament(theta: &StateOfWorld, alpha: &NoiseParams, seed: u64) -> Tournament {
    sample_tournament_with(theta, alpha, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_state_with<R: Rng>(m: usize, n: usize, rng: &mut R) -> Result<StateOfWorld> {
    check_sides(m, n)?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut k = Tournament::zeros(m, n)?;
    for a in 0..m {
        let len = rng.gen_range(0..=n);
        for &b in &perm[..len] {
            k.set(a, b, true);
        }
    }
    canonical_state(&k)
}

/// Canonical state of a random chain tournament: a uniform column order and
/// an independent uniform prefix length for each row.
pub fn sample_state(m: usize, n: usize, seed: u64) -> Result<StateOfWorld> {
    sample_state_with(m, n, &mut ChaCha8Rng::seed_from_u64(seed))
}
