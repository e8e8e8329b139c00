use crate::context::Context;
use crate::counts::CountTable;

/// Log-likelihood ratio of a branch against its stem:
/// `Σ_b Σ_a N(bu, a) log(q̂(a | bu) / q̂(a | u))`.
///
/// Unobserved children contribute nothing.
pub fn bic_delta(counts: &CountTable, stem: &Context, branch: &[Context]) -> f64 {
    let Some(parent) = counts.transitions(stem) else {
        return 0.0;
    };
    let parent_total: u64 = parent.iter().sum();
    let mut delta = 0.0;
    for child in branch {
        let Some(row) = counts.transitions(child) else {
            continue;
        };
        let total: u64 = row.iter().sum();
        for (a, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let q_child = c as f64 / total as f64;
            let q_parent = parent[a] as f64 / parent_total as f64;
            delta += c as f64 * (q_child / q_parent).ln();
        }
    }
    delta
}

/// `C · (|A| − 1)(|B| − 1) / 2 · log n` (the `log n` factor is optional).
pub fn bic_threshold(
    branch_size: usize,
    alphabet_size: usize,
    n: usize,
    c: f64,
    penalty_uses_log_n: bool,
) -> f64 {
    let scale = if penalty_uses_log_n { (n as f64).ln() } else { 1.0 };
    c * (alphabet_size as f64 - 1.0) * (branch_size as f64 - 1.0) / 2.0 * scale
}

/// Prune iff `Δ` is strictly below the penalty. A single-child branch has
/// no free parameters to penalize; it is pruned for any `C > 0`.
pub fn bic_criterion(
    delta: f64,
    branch_size: usize,
    alphabet_size: usize,
    n: usize,
    c: f64,
    penalty_uses_log_n: bool,
) -> bool {
    if branch_size <= 1 {
        return c > 0.0;
    }
    delta < bic_threshold(branch_size, alphabet_size, n, c, penalty_uses_log_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Alphabet;
    use crate::counts::Support;

    #[test]
    fn six_point_delta_and_decisions() {
        let a = Alphabet::new(2).unwrap();
        let x = [0, 0, 1, 0, 0, 1];
        let y = [0, 1, 0, 0, 1, 1];
        let counts = CountTable::build(&x, &y, a, a, 1, Support::FULL).unwrap();
        let delta = bic_delta(&counts, &Context::root(), &[Context::from([0]), Context::from([1])]);
        assert!((delta - 3.0 * 1.5f64.ln()).abs() < 1e-12);
        assert!((delta - 1.2164).abs() < 5e-5);
        assert!((bic_threshold(2, 2, 6, 2.0, true) - 6f64.ln()).abs() < 1e-12);
        assert!(bic_criterion(delta, 2, 2, 6, 2.0, true));
        assert!(!bic_criterion(delta, 2, 2, 6, 1.0, true));
        assert!(!bic_criterion(delta, 2, 2, 6, 0.0, true));
        assert!(!bic_criterion(0.0, 2, 2, 6, 0.0, true));
    }

    #[test]
    fn identical_children_have_zero_delta() {
        let a = Alphabet::new(2).unwrap();
        let x = [0, 1, 0, 1, 0, 1, 0, 1];
        let y = [1, 1, 1, 1, 1, 1, 1, 1];
        let counts = CountTable::build(&x, &y, a, a, 1, Support::aligned(1)).unwrap();
        let delta = bic_delta(&counts, &Context::root(), &[Context::from([0]), Context::from([1])]);
        assert_eq!(delta, 0.0);
    }

    #[test]
    fn single_child_rule() {
        assert!(!bic_criterion(0.0, 1, 3, 100, 0.0, true));
        assert!(bic_criterion(0.0, 1, 3, 100, 1e-9, true));
    }
}
