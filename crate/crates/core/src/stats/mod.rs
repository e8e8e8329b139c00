//! Statistical kernel: two-sample KS, paired t-test, binomial threshold,
//! Brownian-bridge directions and projections.

mod binomial;
mod bridge;
mod ks;
pub mod special;
mod ttest;

pub use binomial::binomial_rejection_threshold;
pub use bridge::{brownian_bridge, project};
pub use ks::{kolmogorov_q, ks_statistic, ks_two_sample};
pub(crate) use ks::{ks_p_value, ks_statistic_sorted};
pub use ttest::{paired_t_one_sided, student_t_upper_tail};

/// Outcome of a hypothesis test; `reject` iff `p_value < level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
}

impl TestResult {
    fn new(statistic: f64, p_value: f64, level: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self {
            statistic,
            p_value,
            reject: p_value < level,
        }
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}
