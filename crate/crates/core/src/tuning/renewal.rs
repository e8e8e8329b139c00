use crate::context::{Context, Symbol};
use crate::counts::count_occurrences;
use crate::error::{Error, Result};
use crate::tree::ContextTree;

/// True iff `w` occurs strictly inside `v`, with at least one symbol of `v`
/// on each side.
fn is_interior(w: &[Symbol], v: &[Symbol]) -> bool {
    let l = w.len();
    if v.len() < l + 2 {
        return false;
    }
    (1..=v.len() - l - 1).any(|i| &v[i..i + l] == w)
}

/// A context usable as a renewal point of `x` under `tree`.
///
/// Candidates are contexts that no context of the tree contains as an
/// interior substring, so the context of any later step lies within the
/// block it starts. Among them the one occurring most often in `x` wins;
/// ties go to the shorter, then lexicographically smaller context.
pub fn renewal_point(tree: &ContextTree, x: &[Symbol]) -> Result<Context> {
    let mut best: Option<(u64, &Context)> = None;
    for w in tree.contexts().iter().filter(|w| !w.is_root()) {
        if tree
            .contexts()
            .iter()
            .any(|v| is_interior(w.symbols(), v.symbols()))
        {
            continue;
        }
        let count = count_occurrences(x, w)?;
        let better = match best {
            None => true,
            Some((c, b)) => {
                count > c || (count == c && (w.len(), w) < (b.len(), b))
            }
        };
        if better {
            best = Some((count, w));
        }
    }
    best.map(|(_, w)| w.clone()).ok_or(Error::NoRenewalPoint)
}

/// Segments of `x` between consecutive occurrence ends of `w`; `w` followed
/// by any block ends with `w` again. The head before the first occurrence
/// is dropped.
pub fn renewal_blocks<'a>(x: &'a [Symbol], w: &Context) -> Result<Vec<&'a [Symbol]>> {
    if w.is_root() {
        return Err(Error::EmptyContext);
    }
    let l = w.len();
    let ends: Vec<usize> = (l..=x.len()).filter(|&t| &x[t - l..t] == w.symbols()).collect();
    if ends.len() < 2 {
        return Err(Error::TooFewRenewals {
            context: w.clone(),
            count: ends.len(),
        });
    }
    Ok(ends.windows(2).map(|e| &x[e[0]..e[1]]).collect())
}
