#![allow(dead_code)]

use seqroctm::simulate::{simulate_ctm, simulate_responses_categorical, EmitterSet, FunctionalEmitter};
use seqroctm::{Alphabet, Context, ContextTree, PairedSample, TransitionTable};

pub fn ctx(v: &[u8]) -> Context {
    Context::from(v)
}

pub fn ternary() -> Alphabet {
    Alphabet::new(3).unwrap()
}

/// Stimulus model of the goalkeeper game: a left is always followed by a
/// center, a right by a left, and two centers by a left.
pub fn goalkeeper_model() -> (ContextTree, TransitionTable) {
    let tree = ContextTree::new(ternary(), vec![ctx(&[0]), ctx(&[2]), ctx(&[0, 1]), ctx(&[1, 1])]);
    let p = TransitionTable::new(
        3,
        vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.2, 0.8],
            vec![1.0, 0.0, 0.0],
        ],
    );
    (tree, p)
}

/// Response model of goalkeeper strategy 1, 2 or 3.
pub fn strategy(k: usize) -> (ContextTree, TransitionTable) {
    match k {
        1 => (
            ContextTree::new(ternary(), vec![ctx(&[0]), ctx(&[1]), ctx(&[2])]),
            TransitionTable::new(3, vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]),
        ),
        2 => (
            goalkeeper_model().0,
            TransitionTable::new(
                3,
                vec![
                    vec![0.0, 1.0, 0.0],
                    vec![1.0, 0.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                    vec![1.0, 0.0, 0.0],
                ],
            ),
        ),
        3 => (ContextTree::root(ternary()), TransitionTable::uniform(3)),
        _ => panic!("no strategy {k}"),
    }
}

pub fn goalkeeper_sample(k: usize, n: usize, seed: u64) -> PairedSample {
    let (tree, p) = goalkeeper_model();
    let x = simulate_ctm(&tree, &p, n, seed, 0).unwrap();
    let (ty, q) = strategy(k);
    let y = simulate_responses_categorical(&x, &ty, &q, seed.wrapping_add(1_000_003)).unwrap();
    PairedSample::categorical(ternary(), x, y, ternary()).unwrap()
}

/// Three-beat model: after a 2 come two symbols from {0, 1} (1 with
/// probability 0.8), then a 2 again.
pub fn beat_model() -> (ContextTree, TransitionTable) {
    let tree = ContextTree::new(
        ternary(),
        vec![
            ctx(&[0, 0]),
            ctx(&[1, 0]),
            ctx(&[2, 0]),
            ctx(&[0, 1]),
            ctx(&[1, 1]),
            ctx(&[2, 1]),
            ctx(&[2]),
        ],
    );
    let fork = vec![0.2, 0.8, 0.0];
    let two = vec![0.0, 0.0, 1.0];
    let p = TransitionTable::new(
        3,
        vec![two.clone(), two.clone(), fork.clone(), two.clone(), two, fork.clone(), fork],
    );
    (tree, p)
}

/// Constant-mean emitters for every context of `tree`, `gap` apart.
pub fn spaced_emitters(tree: &ContextTree, dim: usize, gap: f64, sigma: f64) -> EmitterSet {
    EmitterSet::new(
        FunctionalEmitter::constant(0.0, dim, sigma),
        tree.contexts()
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), FunctionalEmitter::constant(gap * i as f64, dim, sigma)))
            .collect(),
    )
}

/// The same emitter for every context.
pub fn identical_emitters(tree: &ContextTree, dim: usize, sigma: f64) -> EmitterSet {
    EmitterSet::new(
        FunctionalEmitter::constant(0.0, dim, sigma),
        tree.contexts()
            .iter()
            .map(|w| (w.clone(), FunctionalEmitter::constant(0.0, dim, sigma)))
            .collect(),
    )
}
