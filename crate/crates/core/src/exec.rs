//! Execution policy for the bounded searches.
//!
//! Every search in the crate is a pure map over an index range, merged in index
//! order, so the parallel and sequential paths return identical results.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls back
    /// to the sequential path.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Applies `f` to every index in `0..len` and keeps the `Some` results in index order.
pub fn filter_map_range<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() {
            use rayon::prelude::*;
            return (0..len).into_par_iter().filter_map(f).collect();
        }
    }
    let _ = exec;
    (0..len).filter_map(f).collect()
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Returns the smallest index in `0..len` for which `f` yields `Some`, together with the value.
pub fn find_first<T, F>(exec: Execution, len: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() {
            use rayon::prelude::*;
            return (0..len).into_par_iter().filter_map(|i| f(i).map(|t| (i, t))).min_by_key(|(i, _)| *i);
        }
    }
    let _ = exec;
    (0..len).find_map(|i| f(i).map(|t| (i, t)))
}

/// Decodes a flat index into a coefficient vector in the box `[-bound, bound]^dim`.
pub fn box_point(mut index: usize, dim: usize, bound: i64) -> Vec<i64> {
    let side = (2 * bound + 1) as usize;
    let mut out = vec![0i64; dim];
    for slot in out.iter_mut().rev() {
        *slot = (index % side) as i64 - bound;
        index /= side;
    }
    out
}

pub fn box_size(dim: usize, bound: i64) -> usize {
    ((2 * bound + 1) as usize).pow(dim as u32)
}
