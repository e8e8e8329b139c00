use crate::error::{Error, Result};
use crate::sample::PairedSample;
use crate::selection::BicPath;
use crate::transitions::TransitionTable;
use crate::tree::ContextTree;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChampionConfig {
    pub height: usize,
    pub c_min: f64,
    /// Upper end of the search. `None` doubles the range until the root is
    /// reached.
    pub c_max: Option<f64>,
    /// Absolute resolution of the cutoffs.
    pub tol: f64,
    pub penalty_uses_log_n: bool,
}

impl ChampionConfig {
    pub fn new(height: usize) -> Self {
        Self {
            height,
            c_min: 0.0,
            c_max: None,
            tol: 1e-4,
            penalty_uses_log_n: true,
        }
    }
}

/// BIC estimates as the penalty constant grows, from the admissible tree
/// towards the root.
#[derive(Debug, Clone, PartialEq)]
pub struct ChampionChain {
    pub trees: Vec<ContextTree>,
    pub tables: Vec<TransitionTable>,
    pub log_likelihoods: Vec<f64>,
    /// Smallest constant (within `tol`) at which each tree is the estimate.
    pub cutoffs: Vec<f64>,
    /// Upper end of the search actually used.
    pub c_max: f64,
    /// Height of the admissible tree the chain starts from.
    pub height: usize,
}

impl ChampionChain {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn reached_root(&self) -> bool {
        self.trees.last().is_some_and(ContextTree::is_root)
    }

    /// Order, likelihood and cutoff checks; an empty list means the chain is
    /// consistent.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for k in 1..self.trees.len() {
            if !self.trees[k].is_strict_pruning_of(&self.trees[k - 1]) {
                out.push(format!("tree {k} is not a strict pruning of tree {}", k - 1));
            }
            let (prev, cur) = (self.log_likelihoods[k - 1], self.log_likelihoods[k]);
            if cur > prev + 1e-9 * prev.abs().max(1.0) {
                out.push(format!("log-likelihood increases at {k}: {prev} -> {cur}"));
            }
            if self.cutoffs[k] <= self.cutoffs[k - 1] {
                out.push(format!("cutoff does not increase at {k}"));
            }
        }
        out
    }
}

/// Champion trees by bisection on the BIC constant.
///
/// Starting from the estimate at `c_min`, each step bisects for the
/// smallest constant whose estimate differs from the current tree and
/// appends that estimate. Stops at the root or at `c_max`.
pub fn champion_trees(sample: &PairedSample, config: &ChampionConfig) -> Result<ChampionChain> {
    if !(config.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", config.tol)));
    }
    if !(config.c_min >= 0.0 && config.c_min.is_finite()) {
        return Err(Error::InvalidParameter(format!("c_min must be nonnegative, got {}", config.c_min)));
    }
    if let Some(c_max) = config.c_max {
        if !(c_max > config.c_min) {
            return Err(Error::InvalidParameter(format!(
                "c_min ({}) must be below c_max ({c_max})",
                config.c_min
            )));
        }
    }
    let path = BicPath::new(sample, config.height, config.penalty_uses_log_n)?;
    let estimate = |c: f64| -> Result<ContextTree> { Ok(path.prune(c)?.0) };

    let c_max = match config.c_max {
        Some(c) => c,
        None => {
            let mut c = (config.c_min * 2.0).max(1.0);
            for _ in 0..64 {
                if estimate(c)?.is_root() {
                    break;
                }
                c *= 2.0;
            }
            c
        }
    };

    let mut current = estimate(config.c_min)?;
    let mut trees = vec![current.clone()];
    let mut cutoffs = vec![config.c_min];
    let top = estimate(c_max)?;
    while !current.is_root() && !top.same_contexts(&current) {
        let mut lo = *cutoffs.last().unwrap();
        let mut hi = c_max;
        while hi - lo > config.tol {
            let mid = 0.5 * (lo + hi);
            if estimate(mid)?.same_contexts(&current) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let next = estimate(hi)?;
        if !next.is_strict_pruning_of(&current) {
            return Err(Error::ChainOrder(format!(
                "estimate at C = {hi} ({next}) is not a pruning of the estimate below it ({current})"
            )));
        }
        trees.push(next.clone());
        cutoffs.push(hi);
        current = next;
    }
    let (tables, log_likelihoods) = trees.iter().map(|t| path.fit(t)).unzip();
    Ok(ChampionChain {
        trees,
        tables,
        log_likelihoods,
        cutoffs,
        c_max,
        height: config.height,
    })
}
