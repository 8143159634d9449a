//! Thread-pool plumbing for the parallel lanes.

/// Run `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is zero.
pub(crate) fn with_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("building a thread pool cannot fail with these settings")
            .install(f)
    }
}
