//! Batch execution: data-parallel with the `parallel` feature, sequential
//! otherwise. Results are always merged by input index, so the output is
//! identical in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Requested execution strategy for a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Use the rayon thread pool. Falls back to sequential when the
    /// `parallel` feature is disabled.
    Parallel,
}

/// Apply `f` to `0..n`, preserving index order in the result.
pub fn map_indexed<T, F>(par: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match par {
        Parallelism::Sequential => (0..n).map(f).collect(),
        Parallelism::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}
