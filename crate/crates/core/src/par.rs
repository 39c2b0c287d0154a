//! Ordered data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the work is split across the current rayon
//! pool; without it, or inside [`sequential`], everything runs on the calling
//! thread. Results always come back in index order, so downstream reductions
//! are identical either way.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with parallel maps disabled on this thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let old = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(old));
    out
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(Cell::get)
}

/// `(0..n).map(f).collect()`, possibly in parallel.
pub fn map_indexed<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Fallible [`map_indexed`]; the error of the lowest failing index wins.
pub fn try_map_indexed<R: Send, E: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<R, E> + Sync + Send,
) -> Result<Vec<R>, E> {
    map_indexed(n, f).into_iter().collect()
}
