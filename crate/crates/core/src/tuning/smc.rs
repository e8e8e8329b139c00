use rayon::prelude::*;

use super::bootstrap::{bivariate_replicate, BootstrapStrategy, StimulusResampler};
use super::champions::ChampionChain;
use crate::context::Context;
use crate::counts::{CountTable, Support};
use crate::error::{Error, Result};
use crate::parallel;
use crate::rng::derive_seed;
use crate::sample::PairedSample;
use crate::stats::{paired_t_one_sided, TestResult};
use crate::transitions::TransitionTable;
use crate::tree::ContextTree;

/// Log-probability charged to a transition a frozen table gives zero mass.
pub const LOG_FLOOR: f64 = -700.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SmcConfig {
    pub n1: usize,
    pub n2: usize,
    /// Number of bootstrap replicates.
    pub b: usize,
    /// Level of the one-sided t-tests.
    pub alpha: f64,
    /// Likelihood differences are divided by `n^renorm_exponent`.
    pub renorm_exponent: f64,
    pub strategy: BootstrapStrategy,
    pub seed: u64,
    /// Refit each champion's transitions on every resample; `false` keeps
    /// the tables fitted on the original sample.
    pub refit: bool,
}

impl SmcConfig {
    /// `n1 = ⌈0.3 n⌉`, `n2 = ⌈0.9 n⌉`, 200 replicates, level 0.05.
    pub fn for_length(n: usize) -> Self {
        Self {
            n1: (0.3 * n as f64).ceil() as usize,
            n2: (0.9 * n as f64).ceil() as usize,
            b: 200,
            alpha: 0.05,
            renorm_exponent: 0.9,
            strategy: BootstrapStrategy::None,
            seed: 0,
            refit: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmcOutcome {
    /// Index of the selected tree in the chain.
    pub index: usize,
    pub tree: ContextTree,
    /// Test of each consecutive pair `(k, k + 1)`.
    pub tests: Vec<TestResult>,
    /// Renewal point used by the blocks strategy.
    pub renewal: Option<Context>,
}

fn frozen_log_likelihood(counts: &CountTable, tree: &ContextTree, table: &TransitionTable) -> f64 {
    let mut total = 0.0;
    for (i, w) in tree.contexts().iter().enumerate() {
        let Some(row) = counts.transitions(w) else {
            continue;
        };
        for (a, &c) in row.iter().enumerate() {
            if c > 0 {
                total += c as f64 * table.prob(i, a).ln().max(LOG_FLOOR);
            }
        }
    }
    total
}

/// Smallest maximizer criterion over a champion chain.
///
/// Draws `B` resamples of length `n2` (responses simulated from the first
/// champion), truncates each to `n1`, and for every consecutive pair of
/// champions tests whether the normalized likelihood gain grows with the
/// sample size. The first pair whose test rejects marks the selected tree:
/// pruning it further loses likelihood at a rate that grows with `n`. When
/// no test rejects the last tree is selected.
pub fn smc_select(chain: &ChampionChain, sample: &PairedSample, config: &SmcConfig) -> Result<SmcOutcome> {
    if chain.is_empty() {
        return Err(Error::InvalidParameter("champion chain is empty".into()));
    }
    let height = chain.height;
    if !(config.n1 > height && config.n1 < config.n2 && config.n2 <= sample.len()) {
        return Err(Error::InvalidParameter(format!(
            "sizes must satisfy {height} < n1 < n2 <= n, got n1 = {}, n2 = {}, n = {}",
            config.n1,
            config.n2,
            sample.len()
        )));
    }
    if config.b < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 replicates, got {}", config.b)));
    }
    let resampler = StimulusResampler::prepare(&config.strategy, sample.x(), sample.alphabet(), height)?;
    let renewal = resampler.renewal().cloned();
    if chain.len() == 1 {
        return Ok(SmcOutcome {
            index: 0,
            tree: chain.trees[0].clone(),
            tests: Vec::new(),
            renewal,
        });
    }
    let frozen: Vec<TransitionTable> = chain.tables.iter().map(TransitionTable::fill_unobserved_uniform).collect();
    let likelihoods = |counts: &CountTable| -> Vec<f64> {
        chain
            .trees
            .iter()
            .zip(&frozen)
            .map(|(tree, table)| {
                if config.refit {
                    counts.fitted_log_likelihood(tree)
                } else {
                    frozen_log_likelihood(counts, tree, table)
                }
            })
            .collect()
    };
    let per_replicate: Vec<Result<(Vec<f64>, Vec<f64>)>> = parallel::install(|| {
        (0..config.b)
            .into_par_iter()
            .map(|r| {
                let rep = bivariate_replicate(
                    &resampler,
                    sample.alphabet(),
                    &chain.trees[0],
                    &chain.tables[0],
                    config.n2,
                    derive_seed(config.seed, r as u64),
                )?;
                let (y, responses) = rep.categorical_y("smc")?;
                let x = rep.x();
                let mut counts = CountTable::build(
                    &x[..config.n1],
                    &y[..config.n1],
                    sample.alphabet(),
                    responses,
                    height,
                    Support::aligned(height),
                )?;
                let small = likelihoods(&counts);
                counts.extend_to(x, y, config.n2);
                Ok((small, likelihoods(&counts)))
            })
            .collect()
    });
    let per_replicate = per_replicate.into_iter().collect::<Result<Vec<_>>>()?;

    let scale1 = (config.n1 as f64).powf(config.renorm_exponent);
    let scale2 = (config.n2 as f64).powf(config.renorm_exponent);
    let mut tests = Vec::with_capacity(chain.len() - 1);
    for k in 0..chain.len() - 1 {
        let small: Vec<f64> = per_replicate.iter().map(|(s, _)| (s[k] - s[k + 1]) / scale1).collect();
        let large: Vec<f64> = per_replicate.iter().map(|(_, l)| (l[k] - l[k + 1]) / scale2).collect();
        tests.push(paired_t_one_sided(&small, &large, config.alpha)?);
    }
    let index = tests.iter().position(|t| t.reject).unwrap_or(chain.len() - 1);
    Ok(SmcOutcome {
        index,
        tree: chain.trees[index].clone(),
        tests,
        renewal,
    })
}
