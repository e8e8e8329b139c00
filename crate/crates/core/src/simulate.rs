//! Simulation of context tree models and response chains.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with `seed_from_u64`.
//! Categorical draws consume exactly one uniform `f64` per emitted symbol;
//! functional columns consume `D` standard normals each, in grid order.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::context::{Context, Symbol};
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::sample::FunctionalResponses;
use crate::transitions::TransitionTable;
use crate::tree::{validate, ContextTree};

/// What a generator does when a past has no context in the tree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OnMissingContext {
    /// Fail with [`Error::NoContext`].
    #[default]
    Fail,
    /// Draw uniformly. Used by bootstrap resampling, where a fitted tree may
    /// not cover every past a resample produces.
    Uniform,
}

fn check_model(tree: &ContextTree, table: &TransitionTable) -> Result<TransitionTable> {
    let violations = validate(tree, Some(table));
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidModel(text.join("; ")));
    }
    Ok(table.fill_unobserved_uniform())
}

/// Index drawn from `row` with one uniform variate.
fn draw(row: &[f64], u: f64) -> Symbol {
    let mut acc = 0.0;
    let mut last = 0;
    for (a, &p) in row.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = a;
            if u < acc {
                return a as Symbol;
            }
        }
    }
    last as Symbol
}

fn draw_uniform(width: usize, u: f64) -> Symbol {
    ((u * width as f64) as usize).min(width - 1) as Symbol
}

/// Simulates `n` symbols of the chain `(tree, table)`.
///
/// The past starts as a uniformly drawn context; the first `burn_in`
/// generated symbols are discarded.
pub fn simulate_ctm(
    tree: &ContextTree,
    table: &TransitionTable,
    n: usize,
    seed: u64,
    burn_in: usize,
) -> Result<Vec<Symbol>> {
    simulate_ctm_with(tree, table, n, burn_in, OnMissingContext::Fail, &mut seeded(seed))
}

pub fn simulate_ctm_with<R: Rng + ?Sized>(
    tree: &ContextTree,
    table: &TransitionTable,
    n: usize,
    burn_in: usize,
    missing: OnMissingContext,
    rng: &mut R,
) -> Result<Vec<Symbol>> {
    if n == 0 {
        return Err(Error::InvalidParameter("simulation length must be at least 1".into()));
    }
    let table = check_model(tree, table)?;
    let width = table.width();
    let start = &tree.contexts()[rng.random_range(0..tree.len())];
    let head = start.len();
    let mut seq = Vec::with_capacity(head + burn_in + n);
    seq.extend_from_slice(start.symbols());
    for _ in 0..burn_in + n {
        let u: f64 = rng.random();
        let next = match tree.find(&seq) {
            Some(i) => draw(table.row(i), u),
            None => match missing {
                OnMissingContext::Fail => return Err(no_context(tree, &seq)),
                OnMissingContext::Uniform => draw_uniform(width, u),
            },
        };
        seq.push(next);
    }
    Ok(seq.split_off(head + burn_in))
}

fn no_context(tree: &ContextTree, past: &[Symbol]) -> Error {
    let keep = tree.height().min(past.len());
    Error::NoContext(Context::from(&past[past.len() - keep..]))
}

/// Draws `y` given `x`: `y_1` uniform, then `y_{t+1} ~ q(· | c(x_1..t))`.
///
/// Pasts shorter than the tree height without a context are drawn uniformly;
/// longer ones are an error.
pub fn simulate_responses_categorical(
    x: &[Symbol],
    tree: &ContextTree,
    q: &TransitionTable,
    seed: u64,
) -> Result<Vec<Symbol>> {
    simulate_responses_categorical_with(x, tree, q, OnMissingContext::Fail, &mut seeded(seed))
}

pub fn simulate_responses_categorical_with<R: Rng + ?Sized>(
    x: &[Symbol],
    tree: &ContextTree,
    q: &TransitionTable,
    missing: OnMissingContext,
    rng: &mut R,
) -> Result<Vec<Symbol>> {
    let q = check_model(tree, q)?;
    tree.alphabet().check_all(x)?;
    let width = q.width();
    let mut y = Vec::with_capacity(x.len());
    for t in 0..x.len() {
        let u: f64 = rng.random();
        if t == 0 {
            y.push(draw_uniform(width, u));
            continue;
        }
        let past = &x[..t];
        let next = match tree.find(past) {
            Some(i) => draw(q.row(i), u),
            None if t < tree.height() || missing == OnMissingContext::Uniform => {
                draw_uniform(width, u)
            }
            None => return Err(no_context(tree, past)),
        };
        y.push(next);
    }
    Ok(y)
}

/// Mean curve plus pointwise white Gaussian noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEmitter {
    pub mean: Vec<f64>,
    pub sigma: f64,
}

impl FunctionalEmitter {
    pub fn constant(value: f64, dim: usize, sigma: f64) -> Self {
        Self {
            mean: vec![value; dim],
            sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextEmitter {
    pub context: Context,
    #[serde(flatten)]
    pub emitter: FunctionalEmitter,
}

/// Emitters for the contexts of a tree, plus one for steps without a context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmitterSet {
    pub baseline: FunctionalEmitter,
    pub contexts: Vec<ContextEmitter>,
}

impl EmitterSet {
    pub fn new(baseline: FunctionalEmitter, contexts: Vec<(Context, FunctionalEmitter)>) -> Self {
        Self {
            baseline,
            contexts: contexts
                .into_iter()
                .map(|(context, emitter)| ContextEmitter { context, emitter })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.baseline.mean.len()
    }

    pub fn check(&self) -> Result<()> {
        let dim = self.dim();
        for e in std::iter::once(&self.baseline).chain(self.contexts.iter().map(|c| &c.emitter)) {
            if e.mean.len() != dim {
                return Err(Error::ChunkLength {
                    expected: dim,
                    found: e.mean.len(),
                });
            }
            if !(e.sigma >= 0.0 && e.sigma.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "emitter noise must be finite and nonnegative, got {}",
                    e.sigma
                )));
            }
        }
        if dim < 2 {
            return Err(Error::InvalidParameter("emitter curves need at least 2 points".into()));
        }
        Ok(())
    }
}

/// Draws a `D × n` response matrix: column `t` follows the emitter of the
/// context ending at `t`, or the baseline when no context has completed.
pub fn simulate_responses_functional(
    x: &[Symbol],
    tree: &ContextTree,
    emitters: &EmitterSet,
    seed: u64,
) -> Result<FunctionalResponses> {
    emitters.check()?;
    tree.alphabet().check_all(x)?;
    let by_context: HashMap<&Context, &FunctionalEmitter> =
        emitters.contexts.iter().map(|c| (&c.context, &c.emitter)).collect();
    let per_row: Vec<Option<&FunctionalEmitter>> =
        tree.contexts().iter().map(|w| by_context.get(w).copied()).collect();
    let dim = emitters.dim();
    let mut rng = seeded(seed);
    let mut data = Vec::with_capacity(dim * x.len());
    for t in 0..x.len() {
        let emitter = match tree.find(&x[..=t]) {
            Some(i) => per_row[i].ok_or_else(|| Error::MissingEmitter(tree.contexts()[i].clone()))?,
            None => &emitters.baseline,
        };
        for &m in &emitter.mean {
            let z: f64 = rng.sample(StandardNormal);
            data.push(m + emitter.sigma * z);
        }
    }
    FunctionalResponses::from_columns(dim, data)
}
