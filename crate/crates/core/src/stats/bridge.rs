use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Standard Brownian bridge on the grid `t_i = i/(D−1)`.
///
/// Draws `D − 1` increments `N(0, 1/(D−1))` in order; both endpoints are
/// exactly zero.
pub fn brownian_bridge<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "Brownian bridge needs at least 2 grid points, got {d}"
        )));
    }
    let steps = (d - 1) as f64;
    let scale = steps.recip().sqrt();
    let mut w = Vec::with_capacity(d);
    w.push(0.0);
    let mut acc = 0.0;
    for _ in 1..d {
        let z: f64 = rng.sample(StandardNormal);
        acc += scale * z;
        w.push(acc);
    }
    let end = acc;
    for (i, v) in w.iter_mut().enumerate() {
        *v -= (i as f64 / steps) * end;
    }
    w[d - 1] = 0.0;
    Ok(w)
}

/// Riemann inner product `Σ chunk_i · direction_i / (D − 1)`.
pub fn project(chunk: &[f64], direction: &[f64]) -> Result<f64> {
    if chunk.len() != direction.len() {
        return Err(Error::ChunkLength {
            expected: direction.len(),
            found: chunk.len(),
        });
    }
    if chunk.len() < 2 {
        return Err(Error::InvalidParameter("projection needs at least 2 grid points".into()));
    }
    let dot: f64 = chunk.iter().zip(direction).map(|(a, b)| a * b).sum();
    Ok(dot / (chunk.len() - 1) as f64)
}
