use super::special::inc_beta;
use super::{compensated_sum, TestResult};
use crate::error::{Error, Result};

/// `P(T > t)` for Student's t with `df` degrees of freedom.
pub fn student_t_upper_tail(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    let tail = 0.5 * inc_beta(df / 2.0, 0.5, df / (df + t * t));
    if t >= 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// One-sided paired t-test of `E(d_small) < E(d_large)` on the differences
/// `d_large − d_small`.
///
/// Zero-variance differences: a zero mean gives `t = 0` (no rejection), a
/// positive mean gives `t = +∞` (rejection), a negative mean `t = −∞`.
pub fn paired_t_one_sided(d_small: &[f64], d_large: &[f64], level: f64) -> Result<TestResult> {
    if d_small.len() != d_large.len() {
        return Err(Error::LengthMismatch {
            left: d_small.len(),
            right: d_large.len(),
        });
    }
    let b = d_small.len();
    if b < 2 {
        return Err(Error::InvalidParameter(format!(
            "paired t-test needs at least 2 pairs, got {b}"
        )));
    }
    let diffs: Vec<f64> = d_large.iter().zip(d_small).map(|(l, s)| l - s).collect();
    let nb = b as f64;
    let mean = compensated_sum(diffs.iter().copied()) / nb;
    let var = compensated_sum(diffs.iter().map(|d| (d - mean) * (d - mean))) / (nb - 1.0);
    let t = if var > 0.0 {
        mean / (var.sqrt() / nb.sqrt())
    } else if mean == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(mean)
    };
    let p = if t == 0.0 && var == 0.0 {
        1.0
    } else {
        student_t_upper_tail(t, nb - 1.0)
    };
    Ok(TestResult::new(t, p, level))
}
