//! Data-parallel execution shim.
//!
//! Hot loops (second-moment panels, zero scans, per-cell verification) are
//! expressed through these helpers. With the `parallel` feature (default)
//! they dispatch to rayon; without it they run sequentially. Results are
//! identical either way — order of the output vector is the input order,
//! and every reduction used by callers is order-insensitive at the
//! accuracy contracts involved (each parallel item is internally summed
//! with compensated accumulation, not split across threads).
//!
//! The explicitly sequential variants exist so benchmarks can compare the
//! two strategies inside a single compiled configuration.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`map_indexed`]; used by benchmarks and as the
/// fallback body when the `parallel` feature is disabled.
pub fn map_indexed_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Map `f` over a slice, collecting results in input order.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`map_slice`].
pub fn map_slice_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Size the global worker pool. Returns `Err` description if the pool was
/// already initialised (harmless: the first initialisation wins). Without
/// the `parallel` feature this is a no-op.
pub fn configure_workers(jobs: usize) -> std::result::Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        Ok(())
    }
}
