//! Sequences of random objects driven by context tree models.

pub mod context;
pub mod counts;
pub mod error;
pub mod io;
pub mod parallel;
pub mod rng;
pub mod sample;
pub mod selection;
pub mod simulate;
pub mod stats;
pub mod transitions;
pub mod tree;
pub mod tuning;

pub use context::{is_proper_suffix, is_suffix, Alphabet, Context, Symbol};
pub use counts::{count_occurrences, count_transitions, CountTable, Support};
pub use error::{Error, Result};
pub use sample::{FunctionalResponses, PairedSample, Responses};
pub use transitions::{empirical_transitions, log_likelihood, TransitionTable};
pub use tree::{admissible_tree, validate, ContextTree, Violation};
