//! Data-parallel helpers with a sequential fallback.
//!
//! Work is split into fixed-size chunks independent of the thread count. Each
//! chunk is folded sequentially and the chunk results are combined in index
//! order, so both strategies produce bit-identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Items folded together before chunk results are combined.
pub const CHUNK: usize = 8;

/// Execution strategy for group sums and sample sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Falls back to sequential execution when built without the
    /// `parallel` feature.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Folds `0..count` in chunks of [`CHUNK`]; `fold` accumulates item `i` into
/// a chunk accumulator made by `init`, and `combine` merges chunk results in
/// ascending chunk order.
pub fn chunked_fold<A, I, F, C>(strategy: Strategy, count: usize, init: I, fold: F, combine: C) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, usize) + Sync + Send,
    C: Fn(A, A) -> A,
{
    let chunks = count.div_ceil(CHUNK);
    let run_chunk = |c: usize| {
        let mut acc = init();
        for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
            fold(&mut acc, i);
        }
        acc
    };
    let partials: Vec<A> =
        if strategy.is_parallel() { par_collect(chunks, run_chunk) } else { (0..chunks).map(run_chunk).collect() };
    let mut it = partials.into_iter();
    match it.next() {
        None => init(),
        Some(first) => it.fold(first, combine),
    }
}

/// Maps `0..count` preserving order.
pub fn map_ordered<T, F>(strategy: Strategy, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if strategy.is_parallel() {
        par_collect(count, f)
    } else {
        (0..count).map(f).collect()
    }
}

#[cfg(feature = "parallel")]
fn par_collect<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_collect<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
