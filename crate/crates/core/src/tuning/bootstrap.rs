use rand::Rng;
use rayon::prelude::*;

use super::renewal::{renewal_blocks, renewal_point};
use crate::context::{Alphabet, Context, Symbol};
use crate::error::{Error, Result};
use crate::parallel;
use crate::rng::{derive_seed, seeded};
use crate::sample::PairedSample;
use crate::selection::{estimate_ctm, BicConfig};
use crate::simulate::{
    simulate_ctm, simulate_ctm_with, simulate_responses_categorical_with, OnMissingContext,
};
use crate::transitions::TransitionTable;
use crate::tree::ContextTree;

/// BIC constant of the stimulus model fitted when a renewal point or a
/// parametric stimulus model has to be derived from the data.
pub const STIMULUS_MODEL_C: f64 = 1.0;

/// How bootstrap replicates resample the stimulus chain.
#[derive(Debug, Clone, PartialEq)]
pub enum BootstrapStrategy {
    /// Keep `x` (truncated to the target length).
    None,
    /// Simulate from a context tree model fitted to `x` with constant `c`.
    Parametric { c: f64 },
    /// Concatenate renewal blocks of `x`. Without an explicit renewal point
    /// one is derived from a model fitted with [`STIMULUS_MODEL_C`].
    Blocks { renewal: Option<Context> },
}

impl BootstrapStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            BootstrapStrategy::None => "none",
            BootstrapStrategy::Parametric { .. } => "parametric",
            BootstrapStrategy::Blocks { .. } => "blocks",
        }
    }
}

/// `B` independent simulations of `(tree, table)`; replicate `b` uses seed
/// `derive_seed(seed, b)`.
pub fn bootstrap_parametric_ctm(
    tree: &ContextTree,
    table: &TransitionTable,
    n_target: usize,
    b: usize,
    seed: u64,
) -> Result<Vec<Vec<Symbol>>> {
    parallel::install(|| {
        (0..b)
            .into_par_iter()
            .map(|r| simulate_ctm(tree, table, n_target, derive_seed(seed, r as u64), 0))
            .collect()
    })
}

fn block_resample<R: Rng + ?Sized>(w: &Context, blocks: &[&[Symbol]], n_target: usize, rng: &mut R) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(n_target + blocks.iter().map(|b| b.len()).max().unwrap_or(0));
    out.extend_from_slice(w.symbols());
    while out.len() < n_target {
        out.extend_from_slice(blocks[rng.random_range(0..blocks.len())]);
    }
    out.truncate(n_target);
    out
}

/// `B` resamples of length `n_target`: `w` followed by blocks drawn
/// uniformly with replacement.
pub fn bootstrap_blocks(
    x: &[Symbol],
    w: &Context,
    n_target: usize,
    b: usize,
    seed: u64,
) -> Result<Vec<Vec<Symbol>>> {
    let blocks = renewal_blocks(x, w)?;
    Ok(parallel::install(|| {
        (0..b)
            .into_par_iter()
            .map(|r| block_resample(w, &blocks, n_target, &mut seeded(derive_seed(seed, r as u64))))
            .collect()
    }))
}

/// Stimulus resampler with its model or blocks prepared once.
#[derive(Debug, Clone)]
pub enum StimulusResampler<'a> {
    Reuse(&'a [Symbol]),
    Parametric {
        tree: ContextTree,
        table: TransitionTable,
    },
    Blocks {
        renewal: Context,
        blocks: Vec<&'a [Symbol]>,
    },
}

impl<'a> StimulusResampler<'a> {
    /// `height` bounds the stimulus model fitted for the parametric and
    /// automatic-renewal strategies.
    pub fn prepare(strategy: &BootstrapStrategy, x: &'a [Symbol], alphabet: Alphabet, height: usize) -> Result<Self> {
        match strategy {
            BootstrapStrategy::None => Ok(Self::Reuse(x)),
            BootstrapStrategy::Parametric { c } => {
                let est = estimate_ctm(x, alphabet, height, BicConfig::new(*c))?;
                Ok(Self::Parametric {
                    table: est.q_hat.expect("categorical estimate has transitions"),
                    tree: est.tree,
                })
            }
            BootstrapStrategy::Blocks { renewal } => {
                let renewal = match renewal {
                    Some(w) => w.clone(),
                    None => {
                        let est = estimate_ctm(x, alphabet, height, BicConfig::new(STIMULUS_MODEL_C))?;
                        renewal_point(&est.tree, x)?
                    }
                };
                let blocks = renewal_blocks(x, &renewal)?;
                Ok(Self::Blocks { renewal, blocks })
            }
        }
    }

    pub fn renewal(&self) -> Option<&Context> {
        match self {
            Self::Blocks { renewal, .. } => Some(renewal),
            _ => None,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, n_target: usize, rng: &mut R) -> Result<Vec<Symbol>> {
        match self {
            Self::Reuse(x) => {
                if n_target > x.len() {
                    return Err(Error::InvalidParameter(format!(
                        "cannot reuse a chain of length {} for resamples of length {n_target}",
                        x.len()
                    )));
                }
                Ok(x[..n_target].to_vec())
            }
            Self::Parametric { tree, table } => {
                simulate_ctm_with(tree, table, n_target, 0, OnMissingContext::Uniform, rng)
            }
            Self::Blocks { renewal, blocks } => Ok(block_resample(renewal, blocks, n_target, rng)),
        }
    }
}

/// One bivariate replicate: stimulus from `resampler`, responses simulated
/// from `(tree_y, q_y)` along it.
pub(crate) fn bivariate_replicate(
    resampler: &StimulusResampler<'_>,
    alphabet: Alphabet,
    tree_y: &ContextTree,
    q_y: &TransitionTable,
    n_target: usize,
    seed: u64,
) -> Result<PairedSample> {
    let x = resampler.draw(n_target, &mut seeded(derive_seed(seed, 0)))?;
    let y = simulate_responses_categorical_with(
        &x,
        tree_y,
        q_y,
        OnMissingContext::Uniform,
        &mut seeded(derive_seed(seed, 1)),
    )?;
    PairedSample::categorical(alphabet, x, y, Alphabet::new(q_y.width())?)
}

/// `B` bivariate resamples of length `n_target`; replicate `b` uses seed
/// `derive_seed(seed, b)`.
#[allow(clippy::too_many_arguments)]
pub fn bootstrap_bivariate(
    sample: &PairedSample,
    tree_y: &ContextTree,
    q_y: &TransitionTable,
    strategy: &BootstrapStrategy,
    height: usize,
    n_target: usize,
    b: usize,
    seed: u64,
) -> Result<Vec<PairedSample>> {
    let resampler = StimulusResampler::prepare(strategy, sample.x(), sample.alphabet(), height)?;
    parallel::install(|| {
        (0..b)
            .into_par_iter()
            .map(|r| {
                bivariate_replicate(&resampler, sample.alphabet(), tree_y, q_y, n_target, derive_seed(seed, r as u64))
            })
            .collect()
    })
}
