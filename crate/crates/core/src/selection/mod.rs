//! Context tree estimation by pruning the maximal admissible tree.
//!
//! Categorical criteria read counts over the windows ending at `t ≥ L`, the
//! same positions for every string of length `≤ L`. A stem's counts are then
//! the pooled counts of its children, so branch statistics compare nested
//! models fitted on identical data.

mod bic;
mod delta;
mod engine;
mod functional;

pub use bic::{bic_criterion, bic_delta, bic_threshold};
pub use delta::{delta_criterion, delta_statistic};
pub use engine::{prune_tree, Decision, PruneStep};
pub use functional::{functional_criterion, FunctionalConfig, FunctionalOutcome};

use crate::context::{Alphabet, Context, Symbol};
use crate::counts::{CountTable, Support};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::sample::{FunctionalResponses, PairedSample};
use crate::transitions::TransitionTable;
use crate::tree::{admissible_tree, ContextTree};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicConfig {
    pub c: f64,
    /// Multiply the penalty by `log n`.
    pub penalty_uses_log_n: bool,
}

impl BicConfig {
    pub fn new(c: f64) -> Self {
        Self {
            c,
            penalty_uses_log_n: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    Bic(BicConfig),
    /// Prune when no two children rows differ by more than `delta`.
    Delta { delta: f64 },
    Functional(FunctionalConfig),
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Bic(_) => "bic",
            Criterion::Delta { .. } => "delta",
            Criterion::Functional(_) => "functional",
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            Criterion::Bic(b) if !(b.c >= 0.0 && b.c.is_finite()) => Err(Error::InvalidParameter(
                format!("BIC constant must be finite and nonnegative, got {}", b.c),
            )),
            Criterion::Delta { delta } if !(delta > 0.0) => Err(Error::InvalidParameter(format!(
                "delta must be positive, got {delta}"
            ))),
            Criterion::Functional(f) if !(f.alpha > 0.0 && f.alpha < 1.0) => Err(
                Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", f.alpha)),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub tree: ContextTree,
    /// Fitted transition rows (categorical responses only).
    pub q_hat: Option<TransitionTable>,
    pub log_likelihood: Option<f64>,
    pub prune_trace: Vec<PruneStep>,
}

fn check_height(sample: &PairedSample, height: usize) -> Result<()> {
    if height < 1 || height > sample.len() {
        return Err(Error::InvalidHeight {
            height,
            n: sample.len(),
        });
    }
    sample.alphabet().require_estimable()
}

/// BIC pruning of one sample at any penalty constant.
///
/// Counts and the admissible tree are built once, so sweeping `C` (as the
/// champion-tree search does) only repeats the pruning decisions.
#[derive(Debug, Clone)]
pub struct BicPath {
    start: ContextTree,
    counts: CountTable,
    n: usize,
    width: usize,
    penalty_uses_log_n: bool,
}

impl BicPath {
    pub fn new(sample: &PairedSample, height: usize, penalty_uses_log_n: bool) -> Result<Self> {
        check_height(sample, height)?;
        let (y, responses) = sample.categorical_y("bic")?;
        let start = admissible_tree(sample.x(), sample.alphabet(), height)?;
        let counts = CountTable::build(
            sample.x(),
            y,
            sample.alphabet(),
            responses,
            height,
            Support::aligned(height),
        )?;
        Ok(Self {
            start,
            counts,
            n: sample.len(),
            width: responses.size(),
            penalty_uses_log_n,
        })
    }

    /// The maximal admissible tree the pruning starts from.
    pub fn admissible(&self) -> &ContextTree {
        &self.start
    }

    pub fn counts(&self) -> &CountTable {
        &self.counts
    }

    pub fn prune(&self, c: f64) -> Result<(ContextTree, Vec<PruneStep>)> {
        Criterion::Bic(BicConfig::new(c)).check()?;
        prune_tree(&self.start, |stem, branch| {
            let delta = bic_delta(&self.counts, stem, branch);
            debug_assert!(delta >= -1e-9, "negative branch statistic {delta}");
            Ok(Decision {
                statistic: delta,
                threshold: bic_threshold(branch.len(), self.width, self.n, c, self.penalty_uses_log_n),
                prune: bic_criterion(delta, branch.len(), self.width, self.n, c, self.penalty_uses_log_n),
            })
        })
    }

    /// Fitted rows and log-likelihood of `tree` on this sample's counts.
    pub fn fit(&self, tree: &ContextTree) -> (TransitionTable, f64) {
        (
            self.counts.estimate(tree),
            self.counts.fitted_log_likelihood(tree),
        )
    }

    pub fn estimate(&self, c: f64) -> Result<EstimationResult> {
        let (tree, prune_trace) = self.prune(c)?;
        let (q, ll) = self.fit(&tree);
        Ok(EstimationResult {
            tree,
            q_hat: Some(q),
            log_likelihood: Some(ll),
            prune_trace,
        })
    }
}

/// Runs the pruning procedure with `criterion` from the admissible tree of
/// height `height`.
pub fn prune_generic(
    sample: &PairedSample,
    height: usize,
    criterion: &Criterion,
) -> Result<EstimationResult> {
    criterion.check()?;
    check_height(sample, height)?;
    match criterion {
        Criterion::Bic(b) => BicPath::new(sample, height, b.penalty_uses_log_n)?.estimate(b.c),
        Criterion::Delta { delta } => {
            let (y, responses) = sample.categorical_y("delta")?;
            let start = admissible_tree(sample.x(), sample.alphabet(), height)?;
            let counts = CountTable::build(
                sample.x(),
                y,
                sample.alphabet(),
                responses,
                height,
                Support::aligned(height),
            )?;
            let (tree, prune_trace) = prune_tree(&start, |_, branch| {
                let q = counts.estimate(&ContextTree::new(sample.alphabet(), branch.to_vec()));
                let rows: Vec<&[f64]> = (0..q.len())
                    .filter(|&i| q.is_observed(i))
                    .map(|i| q.row(i))
                    .collect();
                let statistic = delta_statistic(&rows);
                Ok(Decision {
                    statistic,
                    threshold: *delta,
                    prune: statistic <= *delta,
                })
            })?;
            Ok(EstimationResult {
                q_hat: Some(counts.estimate(&tree)),
                log_likelihood: Some(counts.fitted_log_likelihood(&tree)),
                tree,
                prune_trace,
            })
        }
        Criterion::Functional(cfg) => {
            let y = sample.functional_y("functional")?;
            let start = admissible_tree(sample.x(), sample.alphabet(), height)?;
            let (tree, prune_trace) = prune_tree(&start, |stem, branch| {
                let samples: Vec<Vec<&[f64]>> =
                    branch.iter().map(|v| leaf_sample(sample.x(), y, v)).collect();
                let out = functional_criterion(&samples, cfg, stem_seed(cfg.seed, stem))?;
                Ok(Decision {
                    statistic: out.rejections as f64,
                    threshold: out.threshold as f64,
                    prune: out.prune,
                })
            })?;
            Ok(EstimationResult {
                tree,
                q_hat: None,
                log_likelihood: None,
                prune_trace,
            })
        }
    }
}

/// Response chunks at the steps `t ∈ [ℓ(v), n]` where the window of `x`
/// ending at `t` equals `v`.
pub fn leaf_sample<'a>(x: &[Symbol], y: &'a FunctionalResponses, v: &Context) -> Vec<&'a [f64]> {
    let l = v.len();
    (l.max(1)..=x.len())
        .filter(|&t| &x[t - l..t] == v.symbols())
        .map(|t| y.column(t - 1))
        .collect()
}

fn stem_seed(seed: u64, stem: &Context) -> u64 {
    stem.symbols()
        .iter()
        .fold(derive_seed(seed, stem.len() as u64), |acc, &s| {
            derive_seed(acc, u64::from(s))
        })
}

/// Categorical SeqROCTM estimate with the BIC or Delta criterion.
pub fn estimate_discrete_seqroctm(
    sample: &PairedSample,
    height: usize,
    criterion: &Criterion,
) -> Result<EstimationResult> {
    if let Criterion::Functional(_) = criterion {
        return Err(Error::ResponseKind {
            criterion: "functional",
            expected: "functional",
        });
    }
    prune_generic(sample, height, criterion)
}

/// Functional SeqROCTM estimate; only the tree is estimated.
pub fn estimate_functional_seqroctm(
    sample: &PairedSample,
    height: usize,
    config: &FunctionalConfig,
) -> Result<ContextTree> {
    Ok(prune_generic(sample, height, &Criterion::Functional(*config))?.tree)
}

/// Context tree model estimate: the chain is its own response.
pub fn estimate_ctm(
    x: &[Symbol],
    alphabet: Alphabet,
    height: usize,
    bic: BicConfig,
) -> Result<EstimationResult> {
    let sample = PairedSample::chain(alphabet, x.to_vec())?;
    prune_generic(&sample, height, &Criterion::Bic(bic))
}
