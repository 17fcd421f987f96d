//! Data-parallel map helper.
//!
//! With the default `parallel` feature, grid sweeps run on a dedicated rayon
//! pool whose size is capped by the `ZONAL_STABILITY_THREADS` environment
//! variable (`0` or unset = automatic). Without the feature, everything runs
//! sequentially. [`map_seq`] is always available so benchmarks can compare the
//! two paths within one build.

/// Environment variable capping the worker-thread count (0 = auto).
pub const THREADS_ENV: &str = "ZONAL_STABILITY_THREADS";

/// Sequential reference implementation of [`map`].
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
mod imp {
    use std::sync::OnceLock;

    fn pool() -> &'static rayon::ThreadPool {
        static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
        POOL.get_or_init(|| {
            let requested = std::env::var(super::THREADS_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .unwrap_or(0);
            let mut builder = rayon::ThreadPoolBuilder::new();
            if requested > 0 {
                builder = builder.num_threads(requested);
            }
            builder
                .thread_name(|i| format!("zonal-{i}"))
                .build()
                .expect("failed to build worker pool")
        })
    }

    /// Parallel map preserving input order.
    pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        use rayon::prelude::*;
        pool().install(|| items.par_iter().map(f).collect())
    }
}

#[cfg(not(feature = "parallel"))]
mod imp {
    /// Sequential fallback used when the `parallel` feature is disabled.
    pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync,
    {
        super::map_seq(items, f)
    }
}

pub use imp::map;
