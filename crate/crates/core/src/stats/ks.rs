use super::TestResult;
use crate::error::{Error, Result};

/// `sup_x |F̂1(x) − F̂2(x)|` by a merged sweep over both sorted samples.
pub fn ks_statistic(s1: &[f64], s2: &[f64]) -> f64 {
    let mut a = s1.to_vec();
    let mut b = s2.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    ks_statistic_sorted(&a, &b)
}

/// Sweep over sorted samples. The gap is tracked as the integer
/// `|i·m − j·n|`, so the result is exactly symmetric in the two samples.
/// Values compare numerically, so `-0.0` and `0.0` tie.
pub(crate) fn ks_statistic_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len() as u128, b.len() as u128);
    let (mut i, mut j) = (0usize, 0usize);
    let mut gap = 0u128;
    while i < a.len() && j < b.len() {
        let v = if b[j] < a[i] { b[j] } else { a[i] };
        // `!(x > v)` rather than `x <= v` keeps the sweep moving on NaN
        while i < a.len() && !(a[i] > v) {
            i += 1;
        }
        while j < b.len() && !(b[j] > v) {
            j += 1;
        }
        gap = gap.max((i as u128 * m).abs_diff(j as u128 * n));
    }
    gap as f64 / (n * m) as f64
}

/// Kolmogorov survival function `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
///
/// Below λ ≈ 1.18 the alternating series converges slowly, so the
/// equivalent theta-function form is summed instead.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let factor = -pi2 / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=100 {
            let odd = (2 * k - 1) as f64;
            let term = (factor * odd * odd).exp();
            sum += term;
            if term < 1e-17 {
                break;
            }
        }
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * sum;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 * sum.abs().max(f64::MIN_POSITIVE) || term < 1e-300 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value at
/// `λ = (√e + 0.12 + 0.11/√e)·D`, `e = nm/(n+m)`.
pub fn ks_two_sample(s1: &[f64], s2: &[f64], level: f64) -> Result<TestResult> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::InvalidParameter("KS test needs two nonempty samples".into()));
    }
    if s1.iter().chain(s2).any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("KS test got a NaN".into()));
    }
    let d = ks_statistic(s1, s2);
    Ok(TestResult::new(d, ks_p_value(d, s1.len(), s2.len()), level))
}

pub(crate) fn ks_p_value(d: f64, n: usize, m: usize) -> f64 {
    if d == 0.0 {
        return 1.0;
    }
    let e = (n as f64 * m as f64) / (n + m) as f64;
    let se = e.sqrt();
    kolmogorov_q((se + 0.12 + 0.11 / se) * d)
}
