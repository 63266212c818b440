//! Bipartite tournaments stored as bit-packed result matrices.
//!
//! Row `a` holds the neighbourhood `K(a)` of row player `a` as a little-endian
//! bitset over the columns. Indices are 0-based throughout the library.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::preorder::{RankingPair, TotalPreorder};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Tournament {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "tournament must have at least one row and column, got {rows}x{cols}"
            )));
        }
        let words = cols.div_ceil(WORD);
        Ok(Tournament {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        })
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Ok(Tournament::zeros(rows, cols)?.complement())
    }

    pub fn from_fn<F: FnMut(usize, usize) -> bool>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Result<Self> {
        let mut t = Tournament::zeros(rows, cols)?;
        for a in 0..rows {
            for b in 0..cols {
                if f(a, b) {
                    t.set(a, b, true);
                }
            }
        }
        Ok(t)
    }

    /// Parses a matrix of 0/1 entries.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut t = Tournament::zeros(m, n)?;
        for (a, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (b, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => t.set(a, b, true),
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "entry ({a},{b}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Cell value; panics on out-of-range indices like slice indexing.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        assert!(
            a < self.rows && b < self.cols,
            "cell ({a},{b}) out of range"
        );
        self.bits[a * self.words + b / WORD] >> (b % WORD) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, a: usize, b: usize, v: bool) {
        let w = &mut self.bits[a * self.words + b / WORD];
        let mask = 1u64 << (b % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Copy with one cell replaced.
    pub fn with_cell(&self, a: usize, b: usize, v: bool) -> Tournament {
        let mut t = self.clone();
        t.set(a, b, v);
        t
    }

    pub fn flipped(&self, a: usize, b: usize) -> Tournament {
        self.with_cell(a, b, !self.get(a, b))
    }

    /// Cell values in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.rows).flat_map(move |a| (0..self.cols).map(move |b| self.get(a, b)))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|a| (0..self.cols).map(|b| self.get(a, b) as u8).collect())
            .collect()
    }

    pub(crate) fn row_words(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    fn check_row(&self, a: usize) -> Result<()> {
        if a >= self.rows {
            return Err(Error::OutOfRange {
                what: "row",
                index: a,
                size: self.rows,
            });
        }
        Ok(())
    }

    fn check_col(&self, b: usize) -> Result<()> {
        if b >= self.cols {
            return Err(Error::OutOfRange {
                what: "column",
                index: b,
                size: self.cols,
            });
        }
        Ok(())
    }

    /// `K(a)`: the columns beaten by row `a`.
    pub fn neighborhood(&self, a: usize) -> Result<Vec<usize>> {
        self.check_row(a)?;
        Ok((0..self.cols).filter(|&b| self.get(a, b)).collect())
    }

    /// `K^{-1}(b)`: the rows beating column `b`.
    pub fn co_neighborhood(&self, b: usize) -> Result<Vec<usize>> {
        self.check_col(b)?;
        Ok((0..self.rows).filter(|&a| self.get(a, b)).collect())
    }

    /// `|K(a)|`
    pub fn row_len(&self, a: usize) -> usize {
        self.row_words(a)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// `|K^{-1}(b)|`
    pub fn col_len(&self, b: usize) -> usize {
        (0..self.rows).filter(|&a| self.get(a, b)).count()
    }

    /// `K(a) ⊆ K(a2)`
    pub fn row_subset(&self, a: usize, a2: usize) -> bool {
        self.row_words(a)
            .iter()
            .zip(self.row_words(a2))
            .all(|(x, y)| x & !y == 0)
    }

    pub fn rows_equal(&self, a: usize, a2: usize) -> bool {
        self.row_words(a) == self.row_words(a2)
    }

    /// `K^{-1}(b) ⊆ K^{-1}(b2)`
    pub fn col_subset(&self, b: usize, b2: usize) -> bool {
        (0..self.rows).all(|a| !self.get(a, b) || self.get(a, b2))
    }

    /// A pair of rows whose neighbourhoods are incomparable, if any.
    pub fn chain_violation(&self) -> Option<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by_key(|&a| self.row_len(a));
        order
            .windows(2)
            .find(|w| !self.row_subset(w[0], w[1]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// Neighbourhoods of the rows are totally ordered by inclusion.
    pub fn has_chain_property(&self) -> bool {
        self.chain_violation().is_none()
    }

    /// The neighbourhood-subset rankings of a chain tournament.
    ///
    /// Rows are ordered by `K(a) ⊆ K(a')`; columns by reversed inclusion of
    /// their co-neighbourhoods, so a column beaten by more rows ranks lower.
    pub fn chain_rankings(&self) -> Result<RankingPair> {
        if let Some((a1, a2)) = self.chain_violation() {
            return Err(Error::NotChain(a1, a2));
        }
        // On a chain, nested sets are equal iff their sizes are equal.
        let row_keys: Vec<usize> = (0..self.rows).map(|a| self.row_len(a)).collect();
        let col_keys: Vec<std::cmp::Reverse<usize>> = (0..self.cols)
            .map(|b| std::cmp::Reverse(self.col_len(b)))
            .collect();
        Ok(RankingPair::new(
            TotalPreorder::from_keys(&row_keys),
            TotalPreorder::from_keys(&col_keys),
        ))
    }

    /// `K* = 1 - Kᵀ`: the same tournament seen from the column side.
    pub fn dual(&self) -> Tournament {
        let mut t = Tournament::zeros(self.cols, self.rows).expect("non-empty shape");
        for a in 0..self.rows {
            for b in 0..self.cols {
                if !self.get(a, b) {
                    t.set(b, a, true);
                }
            }
        }
        t
    }

    pub fn complement(&self) -> Tournament {
        let mut t = self.clone();
        let tail = self.cols % WORD;
        for a in 0..self.rows {
            for w in 0..self.words {
                let idx = a * self.words + w;
                t.bits[idx] = !t.bits[idx];
                if w + 1 == self.words && tail != 0 {
                    t.bits[idx] &= (1u64 << tail) - 1;
                }
            }
        }
        t
    }

    /// Relabels rows by `sigma` and columns by `pi`: `[σπ(K)]_{σ(a),π(b)} = K_{ab}`.
    pub fn permute(&self, sigma: &[usize], pi: &[usize]) -> Result<Tournament> {
        check_permutation(sigma, self.rows, "row permutation")?;
        check_permutation(pi, self.cols, "column permutation")?;
        let mut t = Tournament::zeros(self.rows, self.cols)?;
        for (a, &sa) in sigma.iter().enumerate() {
            for (b, &pb) in pi.iter().enumerate() {
                if self.get(a, b) {
                    t.set(sa, pb, true);
                }
            }
        }
        Ok(t)
    }

    /// Exchanges rows `a1` and `a2`.
    pub fn swap_rows(&self, a1: usize, a2: usize) -> Result<Tournament> {
        self.check_row(a1)?;
        self.check_row(a2)?;
        let mut t = self.clone();
        for w in 0..self.words {
            t.bits.swap(a1 * self.words + w, a2 * self.words + w);
        }
        Ok(t)
    }

    /// Number of differing cells.
    pub fn hamming(&self, other: &Tournament) -> Result<usize> {
        self.check_same_shape(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(x, y)| (x ^ y).count_ones() as usize)
            .sum())
    }

    /// Cellwise XOR: 1 exactly where the two tournaments differ.
    pub fn xor(&self, other: &Tournament) -> Result<Tournament> {
        self.check_same_shape(other)?;
        let mut t = self.clone();
        for (x, y) in t.bits.iter_mut().zip(&other.bits) {
            *x ^= y;
        }
        Ok(t)
    }

    /// Every cell of `self` is at most the matching cell of `other`.
    pub fn is_cellwise_le(&self, other: &Tournament) -> bool {
        self.shape() == other.shape() && self.bits.iter().zip(&other.bits).all(|(x, y)| x & !y == 0)
    }

    pub(crate) fn check_same_shape(&self, other: &Tournament) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    /// All `2^(rows*cols)` tournaments of a shape, in canonical order.
    pub fn enumerate(rows: usize, cols: usize) -> Result<impl Iterator<Item = Tournament>> {
        let cells = rows * cols;
        if cells > 30 {
            return Err(Error::ResourceCap {
                what: "cell count for exhaustive enumeration",
                requested: cells,
                limit: 30,
                hint: "use sampled scopes for larger sizes",
            });
        }
        let base = Tournament::zeros(rows, cols)?;
        Ok((0u64..1u64 << cells).map(move |code| {
            let mut t = base.clone();
            for k in 0..cells {
                if code >> (cells - 1 - k) & 1 == 1 {
                    t.set(k / cols, k % cols, true);
                }
            }
            t
        }))
    }
}

pub(crate) fn check_permutation(p: &[usize], len: usize, what: &str) -> Result<()> {
    if p.len() != len {
        return Err(Error::InvalidInput(format!(
            "{what} has length {}, expected {len}",
            p.len()
        )));
    }
    let mut seen = vec![false; len];
    for &x in p {
        if x >= len || seen[x] {
            return Err(Error::InvalidInput(format!("{what} is not a bijection")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Canonical order: shape first, then row-major lexicographic on cells (0 < 1).
impl Ord for Tournament {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shape().cmp(&other.shape()).then_with(|| {
            for (x, y) in self.bits.iter().zip(&other.bits) {
                let diff = x ^ y;
                if diff != 0 {
                    let first = diff.trailing_zeros();
                    return if x >> first & 1 == 1 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Tournament {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for a in 0..self.rows {
            if a > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for b in 0..self.cols {
                if b > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(a, b) as u8)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.rows {
            let line: Vec<&str> = (0..self.cols)
                .map(|b| if self.get(a, b) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
