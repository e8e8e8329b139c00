//! Bottom-up pruning of an admissible tree.

use std::collections::{BTreeSet, HashSet};

use crate::context::{Alphabet, Context};
use crate::error::Result;
use crate::tree::ContextTree;

/// Outcome of evaluating one terminal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub statistic: f64,
    /// Value the statistic was compared against.
    pub threshold: f64,
    pub prune: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneStep {
    pub stem: Context,
    pub branch: Vec<Context>,
    pub statistic: f64,
    pub threshold: f64,
    pub pruned: bool,
}

/// Prunes `start` level by level, from its height down to 1.
///
/// At level `k` the stems of the depth-`k` leaves that have not been flagged
/// are evaluated in lexicographic order. A pruned branch is replaced by its
/// stem; a kept branch flags its stem and every suffix of it, so no ancestor
/// of a kept branch is evaluated later. Sweeps repeat until nothing changes.
pub fn prune_tree<F>(start: &ContextTree, mut decide: F) -> Result<(ContextTree, Vec<PruneStep>)>
where
    F: FnMut(&Context, &[Context]) -> Result<Decision>,
{
    let alphabet: Alphabet = start.alphabet();
    let mut leaves: BTreeSet<Context> = start.contexts().iter().cloned().collect();
    let mut tested: HashSet<Context> = HashSet::new();
    let mut trace = Vec::new();
    loop {
        let mut changed = false;
        for k in (1..=start.height()).rev() {
            let stems: BTreeSet<Context> = leaves
                .iter()
                .filter(|w| w.len() == k)
                .filter_map(Context::stem)
                .filter(|s| !tested.contains(s))
                .collect();
            for stem in stems {
                if tested.contains(&stem) || leaves.contains(&stem) {
                    continue;
                }
                let branch: Vec<Context> = leaves
                    .iter()
                    .filter(|w| stem.is_proper_suffix_of(w))
                    .cloned()
                    .collect();
                if branch.is_empty() || branch.iter().any(|w| w.len() != k) {
                    continue;
                }
                let d = decide(&stem, &branch)?;
                if d.prune {
                    for w in &branch {
                        leaves.remove(w);
                    }
                    leaves.insert(stem.clone());
                    changed = true;
                } else {
                    for s in stem.suffixes() {
                        tested.insert(Context::from(s));
                    }
                }
                trace.push(PruneStep {
                    stem,
                    branch,
                    statistic: d.statistic,
                    threshold: d.threshold,
                    pruned: d.prune,
                });
            }
        }
        if !changed {
            break;
        }
    }
    let tree = if leaves.len() == 1 && leaves.contains(&Context::root()) {
        ContextTree::root(alphabet)
    } else {
        ContextTree::from_set(alphabet, leaves)
    };
    Ok((tree, trace))
}
