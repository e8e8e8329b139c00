//! Transition tables, empirical transitions and likelihood.

use crate::counts::{CountTable, Support};
use crate::error::{Error, Result};
use crate::sample::PairedSample;
use crate::tree::ContextTree;

/// One probability row per context, aligned with the tree's row order.
///
/// Rows of contexts that were never observed are all-zero and flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    width: usize,
    rows: Vec<Vec<f64>>,
    observed: Vec<bool>,
}

impl TransitionTable {
    pub fn new(width: usize, rows: Vec<Vec<f64>>) -> Self {
        let observed = vec![true; rows.len()];
        Self {
            width,
            rows,
            observed,
        }
    }

    pub fn with_flags(width: usize, rows: Vec<Vec<f64>>, observed: Vec<bool>) -> Self {
        assert_eq!(rows.len(), observed.len());
        Self {
            width,
            rows,
            observed,
        }
    }

    /// A single uniform row: the independence model over `width` symbols.
    pub fn uniform(width: usize) -> Self {
        Self::new(width, vec![vec![1.0 / width as f64; width]])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn prob(&self, row: usize, a: usize) -> f64 {
        self.rows[row][a]
    }

    pub fn is_observed(&self, row: usize) -> bool {
        self.observed[row]
    }

    /// Replaces unobserved rows by the uniform distribution so the table can
    /// drive a simulation.
    pub fn fill_unobserved_uniform(&self) -> TransitionTable {
        let rows = self
            .rows
            .iter()
            .zip(&self.observed)
            .map(|(r, &obs)| {
                if obs {
                    r.clone()
                } else {
                    vec![1.0 / self.width as f64; self.width]
                }
            })
            .collect();
        Self::new(self.width, rows)
    }
}

/// Maximum-likelihood estimate `q̂(a | w) = N^XY(w, a) / Σ_a' N^XY(w, a')`
/// for every context of `tree`, using the plain counting definitions.
pub fn empirical_transitions(sample: &PairedSample, tree: &ContextTree) -> Result<TransitionTable> {
    let counts = full_counts(sample, tree)?;
    Ok(counts.estimate(tree))
}

/// `Σ_w Σ_a N^XY(w, a) log table(a | w)` (natural log) under the plain
/// counting definitions.
pub fn log_likelihood(
    sample: &PairedSample,
    tree: &ContextTree,
    table: &TransitionTable,
) -> Result<f64> {
    if table.len() != tree.len() {
        return Err(Error::MisalignedTable {
            rows: table.len(),
            contexts: tree.len(),
        });
    }
    full_counts(sample, tree)?.log_likelihood(tree, table)
}

fn full_counts(sample: &PairedSample, tree: &ContextTree) -> Result<CountTable> {
    let (y, responses) = sample.categorical_y("empirical transitions")?;
    CountTable::build(
        sample.x(),
        y,
        sample.alphabet(),
        responses,
        tree.height(),
        Support::FULL,
    )
}
