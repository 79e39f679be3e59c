//! Types shared by the Monte Carlo annealers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// What a run reports as its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnealMode {
    /// The state at the end of the anneal.
    Annealer,
    /// The lowest-energy state seen at any point of the anneal.
    #[default]
    Solver,
}

/// Outcome of one Monte Carlo anneal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealResult {
    pub success: bool,
    /// 1 or 0 for a single run; batch averages live in [`BatchSummary`].
    pub p_gs: f64,
    /// Single-spin updates the schedule costs in full.
    pub updates: u64,
    /// Updates performed when the ground state was first reached.
    pub updates_to_gs: Option<u64>,
    pub best_energy: f64,
    pub final_energy: f64,
    /// Hamming weight (after the mask) of the reported state.
    pub reported_hw: usize,
    /// `(update index, best energy)` each time the best energy improves.
    pub best_trace: Vec<(u64, f64)>,
    /// `(s, mean Hamming weight)` after every sweep, when requested.
    pub hw_samples: Vec<(f64, f64)>,
}

/// Aggregate over independent runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub runs: usize,
    pub successes: usize,
    pub p_gs: f64,
    /// Cost of one run in single-spin updates.
    pub updates_per_run: u64,
    /// Mean of `updates_to_gs` over runs that reached the ground state.
    pub mean_updates_to_gs: Option<f64>,
}

impl BatchSummary {
    pub fn from_results(results: &[AnnealResult]) -> Self {
        let runs = results.len();
        let successes = results.iter().filter(|r| r.success).count();
        let hits: Vec<f64> = results.iter().filter_map(|r| r.updates_to_gs.map(|u| u as f64)).collect();
        Self {
            runs,
            successes,
            p_gs: if runs == 0 { 0.0 } else { successes as f64 / runs as f64 },
            updates_per_run: results.first().map_or(0, |r| r.updates),
            mean_updates_to_gs: (!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64),
        }
    }
}

/// Deterministic per-run stream: the seed picks the key, the run index the stream.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Worker count from `PHWO_WORKERS`, else the number of available cores.
pub fn worker_count() -> usize {
    std::env::var("PHWO_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&k| k > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |k| k.get()))
}

/// Maps `f` over `0..runs` on the worker pool, preserving order.
pub fn parallel_runs<T, F>(runs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let workers = worker_count();
    if workers <= 1 || runs <= 1 {
        return (0..runs as u64).map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..runs as u64).into_par_iter().map(&f).collect()),
        Err(_) => (0..runs as u64).map(f).collect(),
    }
}
