//! Occurrence and transition counts.
//!
//! `N^X(u)` counts windows of `x` equal to `u` ending at 1-based positions
//! `t = ℓ(u) ..= n − 1`; `N^XY(u, a)` additionally requires `y_{t+1} = a`.
//! The window ending at `n` is never counted because it has no follower.
//!
//! [`CountTable`] tabulates `N^XY(u, ·)` for every string up to a maximum
//! length. A [`Support`] restricts the window ends to `t ≥ start`: with
//! `start = 0` the counts are exactly the definitions above (the root counts
//! every response `y_1..y_n`); with `start = L` all strings of length `≤ L`
//! are counted over the same positions, so a node's counts are the sum of its
//! children's counts.

use std::collections::HashMap;

use crate::context::{Alphabet, Context, KeyCodec, Symbol};
use crate::error::{Error, Result};
use crate::tree::ContextTree;
use crate::transitions::TransitionTable;

/// Number of occurrences of `u` in `x` ending at `t ≤ n − 1`.
pub fn count_occurrences(x: &[Symbol], u: &Context) -> Result<u64> {
    if u.is_root() {
        return Err(Error::EmptyContext);
    }
    let n = x.len();
    let l = u.len();
    if l > n {
        return Ok(0);
    }
    Ok((l..n).filter(|&t| &x[t - l..t] == u.symbols()).count() as u64)
}

/// Number of occurrences of `u` in `x` ending at `t ≤ n − 1` with `y_{t+1} = a`.
///
/// For the root the window condition is vacuous and every response counts.
pub fn count_transitions(x: &[Symbol], y: &[Symbol], u: &Context, a: Symbol) -> Result<u64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if u.is_root() {
        return Ok(y.iter().filter(|&&b| b == a).count() as u64);
    }
    let n = x.len();
    let l = u.len();
    if l > n {
        return Ok(0);
    }
    Ok((l..n)
        .filter(|&t| &x[t - l..t] == u.symbols() && y[t] == a)
        .count() as u64)
}

/// First 1-based window end counted by a [`CountTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Support {
    start: usize,
}

impl Support {
    /// Every window allowed by the counting definitions.
    pub const FULL: Support = Support { start: 0 };

    /// Only windows ending at `t ≥ depth`, shared by all strings up to `depth`.
    pub fn aligned(depth: usize) -> Self {
        Self { start: depth }
    }

    pub fn start(self) -> usize {
        self.start
    }
}

#[derive(Debug, Clone)]
pub struct CountTable {
    codec: KeyCodec,
    depth: usize,
    support: Support,
    width: usize,
    counted_len: usize,
    slots: HashMap<u64, usize>,
    counts: Vec<u64>,
}

impl CountTable {
    /// Counts every string of length `≤ depth` over the first `len` steps.
    pub fn build(
        x: &[Symbol],
        y: &[Symbol],
        alphabet: Alphabet,
        responses: Alphabet,
        depth: usize,
        support: Support,
    ) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let mut table = Self {
            codec: KeyCodec::new(alphabet, depth)?,
            depth,
            support,
            width: responses.size(),
            counted_len: 0,
            slots: HashMap::new(),
            counts: Vec::new(),
        };
        table.extend_to(x, y, x.len());
        Ok(table)
    }

    /// Counts the steps between the current length and `len`.
    ///
    /// `x` and `y` must extend the prefix already counted. Counting a prefix
    /// and extending it gives the same table as counting the longer prefix.
    pub fn extend_to(&mut self, x: &[Symbol], y: &[Symbol], len: usize) {
        assert!(len <= x.len() && len <= y.len());
        // window end t (1-based) pairs with y_{t+1} = y[t]; t ≤ len − 1
        let first = self.counted_len.max(self.support.start);
        for t in first..len {
            let a = y[t] as usize;
            let mut key = KeyCodec::ROOT;
            self.bump(key, a);
            for l in 0..self.depth.min(t) {
                key = self.codec.extend(key, l, x[t - 1 - l]);
                self.bump(key, a);
            }
        }
        self.counted_len = self.counted_len.max(len);
    }

    #[inline]
    fn bump(&mut self, key: u64, a: usize) {
        let width = self.width;
        let next = self.slots.len();
        let slot = *self.slots.entry(key).or_insert(next);
        if slot == next {
            self.counts.resize(self.counts.len() + width, 0);
        }
        self.counts[slot * width + a] += 1;
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// Size of the response alphabet.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of steps counted so far.
    pub fn len(&self) -> usize {
        self.counted_len
    }

    pub fn is_empty(&self) -> bool {
        self.counted_len == 0
    }

    /// `N^XY(u, ·)`, or `None` when `u` was never counted.
    pub fn transitions(&self, u: &Context) -> Option<&[u64]> {
        self.transitions_of(u.symbols())
    }

    pub fn transitions_of(&self, u: &[Symbol]) -> Option<&[u64]> {
        if u.len() > self.depth {
            return None;
        }
        let slot = *self.slots.get(&self.codec.encode(u))?;
        Some(&self.counts[slot * self.width..(slot + 1) * self.width])
    }

    /// `N^X(u)` under this table's support (`Σ_a N^XY(u, a)`).
    pub fn occurrences(&self, u: &Context) -> u64 {
        self.transitions(u).map_or(0, |r| r.iter().sum())
    }

    /// Maximum-likelihood transition rows for the contexts of `tree`;
    /// contexts never counted get flagged zero rows.
    pub fn estimate(&self, tree: &ContextTree) -> TransitionTable {
        let mut rows = Vec::with_capacity(tree.len());
        let mut observed = Vec::with_capacity(tree.len());
        for w in tree.contexts() {
            match self.transitions(w).filter(|r| r.iter().any(|&c| c > 0)) {
                Some(counts) => {
                    let total: u64 = counts.iter().sum();
                    rows.push(counts.iter().map(|&c| c as f64 / total as f64).collect());
                    observed.push(true);
                }
                None => {
                    rows.push(vec![0.0; self.width]);
                    observed.push(false);
                }
            }
        }
        TransitionTable::with_flags(self.width, rows, observed)
    }

    /// `Σ_w Σ_a N^XY(w, a) log table(a | w)`, with `0 log 0 = 0` and `−∞`
    /// when an observed transition has probability zero.
    pub fn log_likelihood(&self, tree: &ContextTree, table: &TransitionTable) -> Result<f64> {
        if table.len() != tree.len() {
            return Err(Error::MisalignedTable {
                rows: table.len(),
                contexts: tree.len(),
            });
        }
        let mut total = 0.0;
        for (i, w) in tree.contexts().iter().enumerate() {
            let Some(counts) = self.transitions(w) else {
                continue;
            };
            for (a, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let p = table.prob(i, a);
                if p <= 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                total += c as f64 * p.ln();
            }
        }
        Ok(total)
    }

    /// Log-likelihood of `tree` under its own maximum-likelihood rows.
    pub fn fitted_log_likelihood(&self, tree: &ContextTree) -> f64 {
        tree.contexts()
            .iter()
            .filter_map(|w| self.transitions(w))
            .map(row_log_likelihood)
            .sum()
    }
}

/// `Σ_a N(a) log(N(a) / Σ N)` for one count row.
pub(crate) fn row_log_likelihood(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (c as f64 / total).ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(v: &[Symbol]) -> Context {
        Context::from(v)
    }

    #[test]
    fn occurrence_examples() {
        let x = [0, 1, 0, 1, 0];
        assert_eq!(count_occurrences(&x, &ctx(&[0, 1])).unwrap(), 2);
        assert_eq!(count_occurrences(&x, &ctx(&[0])).unwrap(), 2);
        assert_eq!(count_occurrences(&[2, 2, 2], &ctx(&[0])).unwrap(), 0);
        assert!(matches!(count_occurrences(&x, &Context::root()), Err(Error::EmptyContext)));
        assert_eq!(count_occurrences(&[0], &ctx(&[0, 0])).unwrap(), 0);
    }

    #[test]
    fn transition_examples() {
        assert_eq!(
            count_transitions(&[0, 1, 0, 1, 0], &[1, 1, 2, 1, 2], &ctx(&[0, 1]), 2).unwrap(),
            2
        );
        let x = [0, 0, 1, 0, 0, 1];
        let y = [0, 1, 0, 0, 1, 1];
        assert_eq!(count_transitions(&x, &y, &ctx(&[0]), 1).unwrap(), 3);
        assert_eq!(count_transitions(&x, &y, &ctx(&[2]), 1).unwrap(), 0);
        assert_eq!(count_transitions(&x, &y, &Context::root(), 1).unwrap(), 3);
        assert!(count_transitions(&x, &y[..5], &ctx(&[0]), 1).is_err());
    }

    #[test]
    fn full_table_matches_direct_counts() {
        let a = Alphabet::new(3).unwrap();
        let x = [0, 2, 1, 1, 0, 2, 2, 1, 0, 0, 1, 2];
        let y = [1, 1, 0, 2, 2, 0, 1, 1, 2, 0, 0, 1];
        let table = CountTable::build(&x, &y, a, a, 3, Support::FULL).unwrap();
        let mut strings = vec![vec![]];
        for l in 1..=3 {
            let mut next = Vec::new();
            for s in strings.iter().filter(|s| s.len() == l - 1) {
                for b in 0..3 {
                    let mut v = vec![b];
                    v.extend_from_slice(s);
                    next.push(v);
                }
            }
            strings.extend(next);
        }
        for s in strings {
            let u = ctx(&s);
            for sym in 0..3 {
                let direct = count_transitions(&x, &y, &u, sym).unwrap();
                let tabulated = table.transitions(&u).map_or(0, |r| r[sym as usize]);
                assert_eq!(direct, tabulated, "u={u:?} a={sym}");
            }
            if !u.is_root() {
                assert_eq!(count_occurrences(&x, &u).unwrap(), table.occurrences(&u));
            }
        }
    }

    #[test]
    fn aligned_support_nodes_sum_children() {
        let a = Alphabet::new(2).unwrap();
        let x = [0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0];
        let y = [1, 0, 0, 1, 1, 0, 1, 1, 0, 0, 1];
        let table = CountTable::build(&x, &y, a, a, 3, Support::aligned(3)).unwrap();
        for u in [vec![], vec![0], vec![1], vec![1, 0], vec![0, 1]] {
            let parent = table.transitions_of(&u).unwrap_or(&[0, 0]).to_vec();
            let mut pooled = [0u64; 2];
            for b in 0..2 {
                let mut child = vec![b];
                child.extend_from_slice(&u);
                if let Some(r) = table.transitions_of(&child) {
                    pooled[0] += r[0];
                    pooled[1] += r[1];
                }
            }
            assert_eq!(parent, pooled.to_vec(), "u={u:?}");
        }
    }

    #[test]
    fn incremental_extension_matches_rebuild() {
        let a = Alphabet::new(3).unwrap();
        let x: Vec<Symbol> = (0..40).map(|i| ((i * 7 + i / 3) % 3) as Symbol).collect();
        let y: Vec<Symbol> = (0..40).map(|i| ((i * 5 + 1) % 3) as Symbol).collect();
        let mut grown = CountTable::build(&x[..15], &y[..15], a, a, 2, Support::aligned(2)).unwrap();
        grown.extend_to(&x, &y, 40);
        let whole = CountTable::build(&x, &y, a, a, 2, Support::aligned(2)).unwrap();
        for u in [vec![], vec![0], vec![2, 1], vec![1, 1]] {
            assert_eq!(grown.transitions_of(&u), whole.transitions_of(&u));
        }
    }
}
