//! Worker pool sizing.
//!
//! Parallel loops collect results in index order, so outputs do not depend on
//! the number of workers. `SEQROCTM_THREADS` caps the pool size.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

pub const THREADS_VAR: &str = "SEQROCTM_THREADS";

fn requested_threads() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = ThreadPoolBuilder::new();
        if let Some(n) = requested_threads() {
            builder = builder.num_threads(n);
        }
        builder.build().expect("failed to start worker pool")
    })
}

/// Runs `op` inside the library pool.
pub fn install<R: Send>(op: impl FnOnce() -> R + Send) -> R {
    pool().install(op)
}

pub fn current_threads() -> usize {
    pool().current_num_threads()
}
