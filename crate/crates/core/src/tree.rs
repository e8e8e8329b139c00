//! Context trees.
//!
//! A tree is a suffix-free set of contexts. The independence model has the
//! single empty context (the root); serialized documents write it as an empty
//! list of contexts.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::context::{Alphabet, Context, KeyCodec, Symbol};
use crate::error::{Error, Result};
use crate::transitions::TransitionTable;

#[derive(Clone)]
pub struct ContextTree {
    alphabet: Alphabet,
    contexts: Vec<Context>,
    index: HashMap<Context, usize>,
    /// Distinct context lengths, ascending.
    depths: Vec<usize>,
}

impl ContextTree {
    /// Builds a tree from its contexts. An empty list is the root tree.
    ///
    /// Contexts are kept in the given order (transition rows align with it).
    /// Structural checks are left to [`validate`]; see [`ContextTree::checked`].
    pub fn new(alphabet: Alphabet, contexts: Vec<Context>) -> Self {
        let contexts = if contexts.is_empty() {
            vec![Context::root()]
        } else {
            contexts
        };
        let index = contexts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let depths: BTreeSet<usize> = contexts.iter().map(Context::len).collect();
        Self {
            alphabet,
            contexts,
            index,
            depths: depths.into_iter().collect(),
        }
    }

    /// Like [`ContextTree::new`] but rejects trees with violations.
    pub fn checked(alphabet: Alphabet, contexts: Vec<Context>) -> Result<Self> {
        let tree = Self::new(alphabet, contexts);
        let report = validate(&tree, None);
        if let Some(v) = report.first() {
            return Err(Error::InvalidModel(v.to_string()));
        }
        Ok(tree)
    }

    pub fn root(alphabet: Alphabet) -> Self {
        Self::new(alphabet, Vec::new())
    }

    /// Builds a tree with contexts sorted by (length, symbols).
    pub fn from_set(alphabet: Alphabet, contexts: impl IntoIterator<Item = Context>) -> Self {
        let mut v: Vec<Context> = contexts.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v.dedup();
        Self::new(alphabet, v)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Contexts in row order. The root tree yields the single empty context.
    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn is_root(&self) -> bool {
        self.contexts.len() == 1 && self.contexts[0].is_root()
    }

    /// Number of contexts (1 for the root tree).
    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn height(&self) -> usize {
        self.depths.last().copied().unwrap_or(0)
    }

    pub fn position(&self, context: &Context) -> Option<usize> {
        self.index.get(context).copied()
    }

    pub fn contains(&self, context: &Context) -> bool {
        self.index.contains_key(context)
    }

    /// Contexts as a sorted set, for order-insensitive comparison.
    pub fn context_set(&self) -> BTreeSet<Context> {
        self.contexts.iter().cloned().collect()
    }

    /// Same contexts regardless of row order.
    pub fn same_contexts(&self, other: &ContextTree) -> bool {
        self.contexts.len() == other.contexts.len()
            && self.contexts.iter().all(|c| other.contains(c))
    }

    /// Row index of the context that is a suffix of `past`, if any.
    pub fn find(&self, past: &[Symbol]) -> Option<usize> {
        for &d in &self.depths {
            if d > past.len() {
                break;
            }
            let tail = &past[past.len() - d..];
            if let Some(&i) = self.index.get(tail) {
                return Some(i);
            }
        }
        None
    }

    /// The context function: the unique context that is a suffix of `past`.
    pub fn context_of(&self, past: &[Symbol]) -> Result<&Context> {
        match self.find(past) {
            Some(i) => Ok(&self.contexts[i]),
            None => {
                let keep = past.len().min(self.height().max(1));
                Err(Error::NoContext(Context::from(&past[past.len() - keep..])))
            }
        }
    }

    /// Terminal branches: stems `u` whose branch `{w ∈ τ : u ≺ w}` is nonempty
    /// and consists only of contexts `a·u`. Sorted by stem.
    pub fn terminal_branches(&self) -> Vec<(Context, Vec<Context>)> {
        if self.is_root() {
            return Vec::new();
        }
        let mut groups: BTreeMap<Context, Vec<Context>> = BTreeMap::new();
        for w in &self.contexts {
            if let Some(stem) = w.stem() {
                groups.entry(stem).or_default().push(w.clone());
            }
        }
        groups
            .into_iter()
            .filter(|(stem, _)| {
                // every context having the stem as a proper suffix must be a direct child
                self.contexts
                    .iter()
                    .all(|w| !stem.is_proper_suffix_of(w) || w.len() == stem.len() + 1)
            })
            .map(|(stem, mut branch)| {
                branch.sort();
                (stem, branch)
            })
            .collect()
    }

    /// True iff `self` is obtained from `larger` by replacing branches with
    /// their stems: every context of `larger` has a suffix in `self` and every
    /// context of `self` is a suffix of some context of `larger`.
    pub fn is_pruning_of(&self, larger: &ContextTree) -> bool {
        let covered = larger
            .contexts
            .iter()
            .all(|w| w.suffixes().any(|s| self.index.contains_key(s)));
        let inside = self
            .contexts
            .iter()
            .all(|v| larger.contexts.iter().any(|w| v.is_suffix_of(w)));
        covered && inside
    }

    pub fn is_strict_pruning_of(&self, larger: &ContextTree) -> bool {
        self.is_pruning_of(larger) && !self.same_contexts(larger)
    }
}

impl fmt::Debug for ContextTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContextTree")
            .field("alphabet", &self.alphabet.size())
            .field("contexts", &self.contexts)
            .finish()
    }
}

impl fmt::Display for ContextTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.contexts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl PartialEq for ContextTree {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.same_contexts(other)
    }
}

/// One problem found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    SuffixPair { suffix: Context, of: Context },
    Duplicate(Context),
    SymbolOutOfRange { context: Context, symbol: Symbol },
    RowCount { rows: usize, contexts: usize },
    RowLength { row: usize, len: usize, expected: usize },
    NegativeEntry { row: usize, value: f64 },
    RowSum { row: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SuffixPair { suffix, of } => {
                write!(f, "context {suffix} is a suffix of context {of}")
            }
            Violation::Duplicate(c) => write!(f, "context {c} appears twice"),
            Violation::SymbolOutOfRange { context, symbol } => {
                write!(f, "context {context} uses symbol {symbol} outside the alphabet")
            }
            Violation::RowCount { rows, contexts } => {
                write!(f, "{rows} transition rows for {contexts} contexts")
            }
            Violation::RowLength { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            Violation::NegativeEntry { row, value } => {
                write!(f, "row {row} has negative entry {value}")
            }
            Violation::RowSum { row, sum } => write!(f, "row {row} sums to {sum}"),
        }
    }
}

pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Checks suffix-freeness, symbol ranges and, when a table is given, row
/// alignment, nonnegativity and row sums. Rows flagged unobserved are
/// exempt from the sum check. An empty report means the model is valid.
pub fn validate(tree: &ContextTree, table: Option<&TransitionTable>) -> Vec<Violation> {
    let mut out = Vec::new();
    let alphabet = tree.alphabet();
    let mut seen = HashSet::new();
    for c in tree.contexts() {
        if !seen.insert(c) {
            out.push(Violation::Duplicate(c.clone()));
        }
        if let Some(&s) = c.symbols().iter().find(|&&s| !alphabet.contains(s)) {
            out.push(Violation::SymbolOutOfRange {
                context: c.clone(),
                symbol: s,
            });
        }
    }
    for (i, u) in tree.contexts().iter().enumerate() {
        for (j, v) in tree.contexts().iter().enumerate() {
            if i != j && u.is_proper_suffix_of(v) {
                out.push(Violation::SuffixPair {
                    suffix: u.clone(),
                    of: v.clone(),
                });
            }
        }
    }
    if let Some(table) = table {
        if table.len() != tree.len() {
            out.push(Violation::RowCount {
                rows: table.len(),
                contexts: tree.len(),
            });
        }
        for (r, row) in table.rows().iter().enumerate() {
            if row.len() != table.width() {
                out.push(Violation::RowLength {
                    row: r,
                    len: row.len(),
                    expected: table.width(),
                });
            }
            if let Some(&v) = row.iter().find(|&&v| !(v >= 0.0)) {
                out.push(Violation::NegativeEntry { row: r, value: v });
            }
            if table.is_observed(r) {
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    out.push(Violation::RowSum { row: r, sum });
                }
            }
        }
    }
    out
}

/// Strings of length `1..=max_len` with at least one occurrence ending at
/// `t ≤ n − 1` (1-based), as packed keys.
pub(crate) fn occurring_strings(
    x: &[Symbol],
    codec: KeyCodec,
    max_len: usize,
) -> HashSet<u64> {
    let n = x.len();
    let mut set = HashSet::new();
    // t is the 1-based end of the window; x[t - 1] is its most recent symbol.
    for t in 1..n {
        let mut key = KeyCodec::ROOT;
        for len in 0..max_len.min(t) {
            key = codec.extend(key, len, x[t - 1 - len]);
            set.insert(key);
        }
    }
    set
}

/// The maximal admissible context tree of height `height` for `x`.
///
/// A string `w` is a leaf iff it occurs (some window ending at `t ≤ n − 1`)
/// and either has length `height` or none of its one-symbol extensions into
/// the past occurs.
pub fn admissible_tree(x: &[Symbol], alphabet: Alphabet, height: usize) -> Result<ContextTree> {
    let n = x.len();
    if height < 1 || height > n {
        return Err(Error::InvalidHeight { height, n });
    }
    alphabet.check_all(x)?;
    let codec = KeyCodec::new(alphabet, height)?;
    let occurring = occurring_strings(x, codec, height);
    let mut leaves = Vec::new();
    for &key in &occurring {
        let w = codec.decode(key);
        let is_leaf = w.len() == height
            || alphabet
                .symbols()
                .all(|b| !occurring.contains(&codec.extend(key, w.len(), b)));
        if is_leaf {
            leaves.push(w);
        }
    }
    Ok(ContextTree::from_set(alphabet, leaves))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(v: &[Symbol]) -> Context {
        Context::from(v)
    }

    fn a3() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    fn goalkeeper() -> ContextTree {
        ContextTree::new(a3(), vec![ctx(&[0]), ctx(&[2]), ctx(&[0, 1]), ctx(&[1, 1])])
    }

    fn ternary() -> ContextTree {
        ContextTree::new(
            a3(),
            vec![
                ctx(&[0, 0]),
                ctx(&[1, 0]),
                ctx(&[2, 0]),
                ctx(&[0, 1]),
                ctx(&[1, 1]),
                ctx(&[2, 1]),
                ctx(&[2]),
            ],
        )
    }

    #[test]
    fn context_lookup() {
        let t = goalkeeper();
        assert_eq!(t.context_of(&[2, 0, 1, 1]).unwrap(), &ctx(&[1, 1]));
        assert_eq!(t.context_of(&[1, 2]).unwrap(), &ctx(&[2]));
        match t.context_of(&[0, 2, 1]) {
            Err(Error::NoContext(p)) => assert_eq!(p, ctx(&[2, 1])),
            other => panic!("expected NoContext, got {other:?}"),
        }
        let root = ContextTree::root(a3());
        assert!(root.context_of(&[1, 2, 2]).unwrap().is_root());
        assert!(root.context_of(&[]).unwrap().is_root());
    }

    #[test]
    fn terminal_branches_of_goalkeeper_tree() {
        let branches = goalkeeper().terminal_branches();
        assert_eq!(branches, vec![(ctx(&[1]), vec![ctx(&[0, 1]), ctx(&[1, 1])])]);
    }

    #[test]
    fn terminal_branches_of_ternary_tree() {
        let branches = ternary().terminal_branches();
        assert_eq!(
            branches,
            vec![
                (ctx(&[0]), vec![ctx(&[0, 0]), ctx(&[1, 0]), ctx(&[2, 0])]),
                (ctx(&[1]), vec![ctx(&[0, 1]), ctx(&[1, 1]), ctx(&[2, 1])]),
            ]
        );
    }

    #[test]
    fn terminal_branch_at_root() {
        let t = ContextTree::new(a3(), vec![ctx(&[0]), ctx(&[1]), ctx(&[2])]);
        assert_eq!(
            t.terminal_branches(),
            vec![(Context::root(), vec![ctx(&[0]), ctx(&[1]), ctx(&[2])])]
        );
        assert!(ContextTree::root(a3()).terminal_branches().is_empty());
    }

    #[test]
    fn validate_reports_problems() {
        let bad = ContextTree::new(a3(), vec![ctx(&[0]), ctx(&[0, 1])]);
        assert!(validate(&bad, None).is_empty(), "[0] is not a suffix of [0,1]");
        let bad = ContextTree::new(a3(), vec![ctx(&[1]), ctx(&[0, 1])]);
        assert_eq!(
            validate(&bad, None),
            vec![Violation::SuffixPair {
                suffix: ctx(&[1]),
                of: ctx(&[0, 1])
            }]
        );
        let bad = ContextTree::new(a3(), vec![ctx(&[3])]);
        assert!(matches!(
            validate(&bad, None)[0],
            Violation::SymbolOutOfRange { symbol: 3, .. }
        ));

        let t = ContextTree::new(a3(), vec![ctx(&[0])]);
        let table = TransitionTable::new(3, vec![vec![0.5, 0.4, 0.2]]);
        assert!(matches!(validate(&t, Some(&table))[0], Violation::RowSum { row: 0, .. }));
    }

    #[test]
    fn validate_accepts_ternary_model() {
        let table = TransitionTable::new(
            3,
            vec![
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0],
                vec![0.2, 0.8, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0],
                vec![0.2, 0.8, 0.0],
                vec![0.2, 0.8, 0.0],
            ],
        );
        assert!(validate(&ternary(), Some(&table)).is_empty());
        let short = TransitionTable::new(3, vec![vec![1.0, 0.0, 0.0]]);
        assert!(validate(&ternary(), Some(&short))
            .iter()
            .any(|v| matches!(v, Violation::RowCount { rows: 1, contexts: 7 })));
    }

    #[test]
    fn admissible_tree_examples() {
        let a2 = Alphabet::new(2).unwrap();
        let alternating: Vec<Symbol> = (0..20).map(|i| (i % 2) as Symbol).collect();
        let t = admissible_tree(&alternating, a2, 2).unwrap();
        assert_eq!(t.context_set(), [ctx(&[0, 1]), ctx(&[1, 0])].into_iter().collect());

        let t = admissible_tree(&[0, 0, 0, 0], a2, 2).unwrap();
        assert_eq!(t.contexts(), &[ctx(&[0, 0])]);

        assert!(admissible_tree(&[0, 1], a2, 0).is_err());
        assert!(admissible_tree(&[0, 1], a2, 3).is_err());
    }

    #[test]
    fn admissible_tree_complete_depth_three() {
        // de Bruijn sequence B(3,3) wrapped so every length-3 string ends before n
        let db: Vec<Symbol> = vec![
            0, 0, 0, 1, 0, 0, 2, 0, 1, 1, 0, 1, 2, 0, 2, 1, 0, 2, 2, 1, 1, 1, 2, 1, 2, 2, 2, 0, 0,
            0,
        ];
        let t = admissible_tree(&db, a3(), 3).unwrap();
        assert_eq!(t.len(), 27);
        assert!(t.contexts().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn pruning_relation() {
        let full = ternary();
        let pruned = ContextTree::new(a3(), vec![ctx(&[0]), ctx(&[0, 1]), ctx(&[1, 1]), ctx(&[2, 1]), ctx(&[2])]);
        assert!(pruned.is_strict_pruning_of(&full));
        assert!(!full.is_pruning_of(&pruned));
        assert!(ContextTree::root(a3()).is_strict_pruning_of(&full));
        assert!(full.is_pruning_of(&full));
        assert!(!full.is_strict_pruning_of(&full));
    }
}
