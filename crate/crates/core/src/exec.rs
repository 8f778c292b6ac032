//! Data-parallel map/reduce with a sequential fallback.
//!
//! With the `parallel` feature, [`Execution::Parallel`] runs on rayon's
//! current pool; without it, both modes run on the calling thread. Callers
//! must pass an associative `reduce` so results do not depend on the split.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `range` and folds with `reduce`, starting from `identity`.
pub fn map_reduce<T, M, R, I>(exec: Execution, range: std::ops::Range<u64>, identity: I, map: M, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    M: Fn(u64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(&map).reduce(&identity, &reduce);
    }
    let _ = exec;
    range.map(map).fold(identity(), reduce)
}

/// Runs `f` with at most `threads` worker threads; `0` keeps the default pool.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}
