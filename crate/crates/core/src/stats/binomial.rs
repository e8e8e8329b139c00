use crate::error::{Error, Result};

/// `k* = min{k : P(Bin(n, α) ≥ k) ≤ β}` by an exact log-space tail sum.
///
/// `β ≥ 1` gives 0: the count is always at least 0.
pub fn binomial_rejection_threshold(n: u64, alpha: f64, beta: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("number of directions must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    if beta >= 1.0 {
        return Ok(0);
    }
    // log pmf by the ratio recursion
    let odds = (alpha / (1.0 - alpha)).ln();
    let mut log_pmf = Vec::with_capacity(n as usize + 1);
    let mut lp = n as f64 * (-alpha).ln_1p();
    log_pmf.push(lp);
    for k in 0..n {
        lp += ((n - k) as f64 / (k + 1) as f64).ln() + odds;
        log_pmf.push(lp);
    }
    let log_beta = beta.ln();
    let mut log_tail = f64::NEG_INFINITY;
    let mut threshold = n + 1;
    for k in (0..=n).rev() {
        log_tail = log_add(log_tail, log_pmf[k as usize]);
        if log_tail > log_beta {
            break;
        }
        threshold = k;
    }
    Ok(threshold)
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
