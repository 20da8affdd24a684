use rayon::prelude::*;

use super::config::Stopping;
use crate::error::Result;

/// Trials handled by one task. Fixed, so the split of work into partial
/// results is the same for every worker count.
pub const CHUNK: u64 = 32;

/// Partial result of a run of consecutive trials.
pub trait Accumulate: Send + Sized {
    fn merge(&mut self, other: Self);
}

/// Runs trials `0, 1, 2, …` in batches of `batch` until `done` holds after
/// a batch or `stop.max_trials` is reached, never before `stop.min_trials`.
///
/// `trial(i, acc)` must depend only on `i` and its own state, so that chunks
/// can run on any thread. `fresh` builds an empty accumulator plus whatever
/// per-chunk scratch the trial needs. Partial results are merged in trial
/// order, so floating-point sums are reproducible.
pub fn run_trials<A, S, F, T, D>(stop: &Stopping, batch: u64, fresh: F, trial: T, done: D) -> Result<(A, u64)>
where
    A: Accumulate,
    F: Fn() -> Result<(A, S)> + Sync,
    T: Fn(u64, &mut S, &mut A) -> Result<()> + Sync,
    D: Fn(&A) -> bool,
{
    let (mut total, _) = fresh()?;
    let mut trials = 0u64;
    while trials < stop.max_trials {
        let end = (trials + batch.max(1)).min(stop.max_trials);
        let starts: Vec<u64> = (trials..end).step_by(CHUNK as usize).collect();
        let parts: Vec<A> = starts
            .into_par_iter()
            .map(|s| {
                let (mut acc, mut scratch) = fresh()?;
                for i in s..(s + CHUNK).min(end) {
                    trial(i, &mut scratch, &mut acc)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        for p in parts {
            total.merge(p);
        }
        trials = end;
        if trials >= stop.min_trials && done(&total) {
            break;
        }
    }
    Ok((total, trials))
}

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| crate::error::Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
