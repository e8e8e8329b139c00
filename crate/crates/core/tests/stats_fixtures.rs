//! Statistics kernel against offline reference values (scripts/stats_oracle.py).

use serde_json::Value;
use seqroctm::stats::special::{inc_beta, ln_gamma};
use seqroctm::stats::{binomial_rejection_threshold, ks_two_sample, paired_t_one_sided};

fn fixtures() -> Value {
    let text = include_str!("fixtures/stats_reference.json");
    serde_json::from_str(text).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn ks_matches_reference() {
    for case in fixtures()["ks"].as_array().unwrap() {
        let r = ks_two_sample(&floats(&case["s1"]), &floats(&case["s2"]), 0.05).unwrap();
        let d = case["d"].as_f64().unwrap();
        let p = case["p"].as_f64().unwrap();
        assert!((r.statistic - d).abs() < 1e-9, "D {} vs {}", r.statistic, d);
        assert!((r.p_value - p).abs() < 1e-6, "p {} vs {}", r.p_value, p);
    }
}

#[test]
fn paired_t_matches_reference() {
    for case in fixtures()["t_test"].as_array().unwrap() {
        let r = paired_t_one_sided(&floats(&case["small"]), &floats(&case["large"]), 0.05).unwrap();
        let t = case["t"].as_f64().unwrap();
        let p = case["p"].as_f64().unwrap();
        assert!((r.statistic - t).abs() < 1e-9 * t.abs().max(1.0), "t {} vs {}", r.statistic, t);
        assert!((r.p_value - p).abs() < 1e-6, "p {} vs {}", r.p_value, p);
    }
}

#[test]
fn binomial_threshold_matches_reference() {
    for case in fixtures()["binomial_threshold"].as_array().unwrap() {
        let n = case["n"].as_u64().unwrap();
        let alpha = case["alpha"].as_f64().unwrap();
        let beta = case["beta"].as_f64().unwrap();
        let k = case["k"].as_u64().unwrap();
        assert_eq!(binomial_rejection_threshold(n, alpha, beta).unwrap(), k, "n={n} a={alpha} b={beta}");
    }
}

#[test]
fn special_functions_match_reference() {
    let f = fixtures();
    for case in f["ln_gamma"].as_array().unwrap() {
        let x = case["x"].as_f64().unwrap();
        let v = case["value"].as_f64().unwrap();
        assert!((ln_gamma(x) - v).abs() <= 1e-10 * v.abs().max(1.0), "ln_gamma({x})");
    }
    for case in f["inc_beta"].as_array().unwrap() {
        let (a, b, x) = (
            case["a"].as_f64().unwrap(),
            case["b"].as_f64().unwrap(),
            case["x"].as_f64().unwrap(),
        );
        let v = case["value"].as_f64().unwrap();
        assert!((inc_beta(a, b, x) - v).abs() <= 1e-10 * v.abs().max(1e-300), "I_{x}({a},{b})");
    }
}
