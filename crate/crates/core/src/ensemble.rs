//! Deterministic parallel path generation.
//!
//! Path `i` always draws from stream `i` of a ChaCha8 generator keyed by the
//! master seed, and results come back in path order, so ensemble output does
//! not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Path count, seeding and discretization shared by the Monte Carlo routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n_paths: usize,
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    /// Real-time grid step.
    pub step: f64,
    /// Operational-time step of the subordinator.
    pub op_step: f64,
}

/// Random stream for `path_id` under `master_seed`.
pub fn substream(master_seed: u64, path_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path_id);
    rng
}

/// Runs `f(path_id, rng)` for every path on `workers` threads (0 = all
/// cores) and returns the results in path order.
pub fn map_paths<T, F>(n_paths: usize, master_seed: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        (0..n_paths as u64)
            .into_par_iter()
            .map(|i| f(i, &mut substream(master_seed, i)))
            .collect()
    }))
}

/// As [`map_paths`] for fallible path simulations; the first error in path
/// order is returned.
pub fn try_map_paths<T, F>(n_paths: usize, master_seed: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    map_paths(n_paths, master_seed, workers, f)?.into_iter().collect()
}
