/// `max_{b≠c} max_a |q̂(a | bu) − q̂(a | cu)|` over observed children rows.
/// Fewer than two rows give 0.
pub fn delta_statistic(rows: &[&[f64]]) -> f64 {
    let mut best = 0.0f64;
    for (i, r) in rows.iter().enumerate() {
        for s in &rows[i + 1..] {
            for (p, q) in r.iter().zip(s.iter()) {
                best = best.max((p - q).abs());
            }
        }
    }
    best
}

/// Prune iff the statistic does not exceed `delta`.
pub fn delta_criterion(rows: &[&[f64]], delta: f64) -> bool {
    delta_statistic(rows) <= delta
}
