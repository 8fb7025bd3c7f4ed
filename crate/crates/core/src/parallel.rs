//! Deterministic batch execution.
//!
//! Sample `i` of a batch always draws from stream `i` of the batch seed, and
//! results are collected in index order, so output never depends on the
//! number of worker threads.

use std::sync::OnceLock;

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};
use crate::noise::NoiseDriver;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "HARDEDGE_THREADS";

fn configured_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(configured_threads())
            .build()
            .expect("failed to build worker pool")
    })
}

/// Runs `f` on streams `0..count` of `seed` and returns the results in
/// stream order. The first error (by stream index) is returned.
pub fn batch<R, F>(seed: u64, count: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut NoiseDriver) -> Result<R> + Sync,
{
    pool().install(|| {
        (0..count as u64)
            .into_par_iter()
            .map(|i| f(&mut NoiseDriver::new(seed, i)))
            .collect::<Vec<Result<R>>>()
    })
    .into_iter()
    .collect()
}

/// Worker threads in the shared pool.
pub fn threads() -> usize {
    pool().current_num_threads()
}

/// Builds a one-off pool of `n` threads and runs `batch` inside it.
pub fn batch_with_threads<R, F>(n: usize, seed: u64, count: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut NoiseDriver) -> Result<R> + Sync,
{
    let local = rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .map_err(|e| Error::Experiment(e.to_string()))?;
    local
        .install(|| {
            (0..count as u64)
                .into_par_iter()
                .map(|i| f(&mut NoiseDriver::new(seed, i)))
                .collect::<Vec<Result<R>>>()
        })
        .into_iter()
        .collect()
}
