#![allow(dead_code)]

use chainrank::Tournament;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn t(rows: &[&[u8]]) -> Tournament {
    Tournament::from_rows(rows).unwrap()
}

pub fn nested_rows() -> Tournament {
    t(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 1, 1, 1]])
}

pub fn three_by_four() -> Tournament {
    t(&[&[1, 0, 1, 0], &[1, 1, 0, 0], &[0, 1, 1, 1]])
}

pub fn four_by_five() -> Tournament {
    t(&[
        &[1, 1, 1, 1, 0],
        &[0, 1, 0, 0, 1],
        &[0, 1, 0, 1, 1],
        &[0, 1, 1, 0, 0],
    ])
}

pub fn random_tournament(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Tournament {
    Tournament::from_fn(m, n, |_, _| rng.gen::<bool>()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn all(m: usize, n: usize) -> Vec<Tournament> {
    Tournament::enumerate(m, n).unwrap().collect()
}

/// Row masks, column `b` at bit `b`.
pub fn masks(k: &Tournament) -> Vec<u32> {
    (0..k.rows())
        .map(|a| {
            (0..k.cols())
                .filter(|&b| k.get(a, b))
                .map(|b| 1u32 << b)
                .sum()
        })
        .collect()
}

pub fn from_masks(rows: &[u32], n: usize) -> Tournament {
    Tournament::from_fn(rows.len(), n, |a, b| rows[a] >> b & 1 == 1).unwrap()
}

/// Pairwise nesting of row masks.
pub fn is_chain(rows: &[u32]) -> bool {
    rows.iter()
        .all(|&r| rows.iter().all(|&s| r & s == r || r & s == s))
}

/// Closest chain tournaments by scanning every matrix, sorted canonically.
pub fn naive_closest(k: &Tournament) -> (usize, Vec<Tournament>) {
    naive_closest_by(k, |_, _| true)
}

/// As [`naive_closest`], restricted to candidates passing `allowed(original, candidate)`.
pub fn naive_closest_by(
    k: &Tournament,
    allowed: impl Fn(&[u32], &[u32]) -> bool,
) -> (usize, Vec<Tournament>) {
    let (m, n) = k.shape();
    let orig = masks(k);
    let mut best = usize::MAX;
    let mut out = Vec::new();
    for code in 0u64..1 << (m * n) {
        let rows: Vec<u32> = (0..m)
            .map(|a| ((code >> (a * n)) & ((1 << n) - 1)) as u32)
            .collect();
        if !is_chain(&rows) || !allowed(&orig, &rows) {
            continue;
        }
        let d: usize = rows
            .iter()
            .zip(&orig)
            .map(|(x, y)| (x ^ y).count_ones() as usize)
            .sum();
        if d < best {
            best = d;
            out.clear();
        }
        if d == best {
            out.push(from_masks(&rows, n));
        }
    }
    out.sort();
    (best, out)
}

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
