use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::parallel;
use crate::rng::{derive_seed, seeded};
use crate::stats::{binomial_rejection_threshold, brownian_bridge, project};
use crate::stats::{ks_p_value, ks_statistic_sorted};

/// Settings of the projective functional test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalConfig {
    /// Number of Brownian-bridge directions.
    pub n_bm: u64,
    /// Level of each direction's KS comparison.
    pub alpha: f64,
    /// Level of the binomial aggregation.
    pub beta: f64,
    pub seed: u64,
    /// Split `alpha` across leaf pairs within a direction.
    pub bonferroni: bool,
}

impl FunctionalConfig {
    pub fn new(n_bm: u64, alpha: f64, beta: f64, seed: u64) -> Self {
        Self {
            n_bm,
            alpha,
            beta,
            seed,
            bonferroni: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionalOutcome {
    /// Directions on which some pair of leaves differed.
    pub rejections: u64,
    pub threshold: u64,
    pub prune: bool,
}

/// Tests equality of law across leaf samples by random projections.
///
/// `samples[v]` holds the response chunks observed after leaf `v`. Leaves
/// with fewer than two chunks are ignored; with at most one leaf left the
/// branch is pruned. Directions are drawn from `seed` and evaluated in
/// parallel; the outcome does not depend on scheduling.
pub fn functional_criterion(samples: &[Vec<&[f64]>], config: &FunctionalConfig, seed: u64) -> Result<FunctionalOutcome> {
    let threshold = binomial_rejection_threshold(config.n_bm, config.alpha, config.beta)?;
    let leaves: Vec<&Vec<&[f64]>> = samples.iter().filter(|s| s.len() >= 2).collect();
    if leaves.len() <= 1 {
        return Ok(FunctionalOutcome {
            rejections: 0,
            threshold,
            prune: true,
        });
    }
    let dim = leaves[0][0].len();
    for chunk in leaves.iter().flat_map(|s| s.iter()) {
        if chunk.len() != dim {
            return Err(Error::ChunkLength {
                expected: dim,
                found: chunk.len(),
            });
        }
    }
    let pairs = leaves.len() * (leaves.len() - 1) / 2;
    let level = if config.bonferroni {
        config.alpha / pairs as f64
    } else {
        config.alpha
    };
    let outcomes: Vec<Result<bool>> = parallel::install(|| {
        (0..config.n_bm)
            .into_par_iter()
            .map(|i| direction_rejects(&leaves, dim, level, derive_seed(seed, i)))
            .collect()
    });
    let mut rejections = 0;
    for r in outcomes {
        rejections += u64::from(r?);
    }
    Ok(FunctionalOutcome {
        rejections,
        threshold,
        prune: rejections < threshold,
    })
}

fn direction_rejects(leaves: &[&Vec<&[f64]>], dim: usize, level: f64, seed: u64) -> Result<bool> {
    let direction = brownian_bridge(dim, &mut seeded(seed))?;
    let mut projected = Vec::with_capacity(leaves.len());
    for sample in leaves {
        let mut values = sample
            .iter()
            .map(|chunk| project(chunk, &direction))
            .collect::<Result<Vec<f64>>>()?;
        values.sort_by(f64::total_cmp);
        projected.push(values);
    }
    for i in 0..projected.len() {
        for j in i + 1..projected.len() {
            let d = ks_statistic_sorted(&projected[i], &projected[j]);
            if ks_p_value(d, projected[i].len(), projected[j].len()) < level {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
